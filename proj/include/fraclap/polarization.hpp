#pragma once

#include "fraclap/energy.hpp"
#include "fraclap/grid_function.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/lattice.hpp"

#include <string>
#include <vector>

namespace fraclap {

// Node-wise two-point rearrangement. Variant P: min on Sigma_a^+, max on Sigma_a^-;
// PTilde swaps the two. Throws PreconditionError unless u's window is sigma_a-closed.
GridFunction polarize(const GridFunction& u, const ReflectionParam& a, Variant variant);

// u composed with sigma_a.
GridFunction reflect(const GridFunction& u, const ReflectionParam& a);

struct IdentityReport {
  std::vector<std::size_t> expansion_violations;     // (P_a u)^+ + (P_a u)^- != P_a u^+ + P_a u^-
  std::vector<std::size_t> decomposition_violations; // P_a u != P_a u^+ - PTilde_a(-u^-)
  // h^N-weighted sums of |u^+-|^p, F(u^+-), f(u^+-)u^+-, before and after polarization
  std::vector<double> sums_before;
  std::vector<double> sums_after;
  double max_sum_rel_diff = 0.0;
  bool ok() const { return expansion_violations.empty() && decomposition_violations.empty() && max_sum_rel_diff == 0.0; }
};

// Sums are accumulated over sorted terms, so a permutation of node values gives bit-identical results.
IdentityReport polarization_identities_check(const GridFunction& u, const ReflectionParam& a, const Nonlinearity& nl);

struct PairingDeficit {
  double deficit_plus = 0.0;     // dpairing(u,u^+) - dpairing(P_a u, (P_a u)^+)
  double deficit_minus = 0.0;
  double seminorm_deficit = 0.0; // [u]^p - [P_a u]^p
  double eps_num = 0.0;          // 1e-10 p[u]^p + 2 tau_kappa sum|u|^p
  double eps_eq = 0.0;           // 1e-10 p[u]^p
  double tail_term = 0.0;        // 2 tau_kappa sum|u|^p
  double scale = 0.0;            // p [u]^p
};

// Needs k.window == u.window, sigma_a-closed, and the kernel condition; otherwise throws PreconditionError.
PairingDeficit polarization_pairing_deficit(const GridFunction& u, const ReflectionParam& a, const KernelWeights& k);

enum class EqualityCase { case_i, case_ii, case_iii_plus, case_iii_minus, strict };
std::string to_string(EqualityCase c);

struct EqualityReport {
  EqualityCase cls = EqualityCase::strict;
  PairingDeficit deficits;
};

EqualityReport equality_case(const GridFunction& u, const ReflectionParam& a, const KernelWeights& k);

} // namespace fraclap
