#pragma once

#include "fraclap/eigensolver.hpp"
#include "fraclap/energy.hpp"
#include "fraclap/grid_function.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/lattice.hpp"

#include <cstdint>
#include <vector>

namespace fraclap {

// (t_+, t_-) with t_+ v^+ + t_- v^- on the nodal Nehari set:
//   (1/p)<D[u]^p, u^+-> = h^N sum f(u^+-) u^+-   for u = t_+ v^+ + t_- v^-.
struct NehariScale {
  double t_plus = 1.0;
  double t_minus = 1.0;
  double residual_plus = 0.0; // the two equations above at u, left minus right
  double residual_minus = 0.0;
  int iterations = 0;
  bool newton = true; // false when the alternating fallback was needed
};

// v sign-changing on the kernel window (or a sub-window). Requires a superhomogeneous f.
// Throws ConvergenceError when neither Newton nor the alternating 1D solves converge.
NehariScale nehari_scale(const GridFunction& v, const Nonlinearity& nl, const KernelWeights& k);

struct LensOptions {
  double tol = 1e-8;
  int multistarts = 3;
  std::uint64_t seed = 0;
  int max_iter = 4000;
};

struct LensReport {
  double level = 0.0; // E(u)
  GridFunction u;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  double g_identity_gap = 0.0; // |E(u) - (1/p) h^N sum G(u_i)|
  double scale = 0.0;          // h^N sum f(u) u, for relative comparisons
  double stationarity = 0.0;   // max_k |dE/du_k| / (h^N max_k |f(u_k)|)
  NehariScale reprojection;    // nehari_scale applied to the returned u
  int iterations = 0;
  int multistart_id = 0;
  bool converged = false;
  std::vector<MultistartOutcome> outcomes;
  std::vector<double> history;
};

// Minimizes E over sign-changing functions on the mask of d that lie on the nodal Nehari set.
LensReport lens_minimize(const LatticeDomain& d, const Nonlinearity& nl, const KernelWeights& k,
                         const LensOptions& opt);

struct GroundState {
  double level = 0.0;
  GridFunction u; // >= 0
  double residual = 0.0; // [u]^p - h^N sum f(u) u
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimizer of E on the one-signed Nehari set {u >= 0, u != 0}.
GroundState nehari_ground_state(const LatticeDomain& d, const Nonlinearity& nl, const KernelWeights& k, double tol,
                                int max_iter = 4000);

// Comparison of a candidate v against a reference minimizer u: F-sum not smaller, the
// f(u^+-)u^+- sums equal, and the sign-split pairings not larger, all within tol (relative).
struct LensCheck {
  double F_v = 0.0, F_u = 0.0;
  double f_plus_v = 0.0, f_plus_u = 0.0;
  double f_minus_v = 0.0, f_minus_u = 0.0;
  double pair_plus_v = 0.0, pair_plus_u = 0.0;
  double pair_minus_v = 0.0, pair_minus_u = 0.0;
  bool F_ok = false;
  bool f_ok = false;
  bool pairing_ok = false;
  bool ok = false;
};

LensCheck lens_verify(const GridFunction& v, const GridFunction& u, const Nonlinearity& nl, const KernelWeights& k,
                      double tol);

} // namespace fraclap
