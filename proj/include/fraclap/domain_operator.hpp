#pragma once

#include "fraclap/grid_function.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/lattice.hpp"
#include "fraclap/pair_kernels.hpp"

#include <span>
#include <vector>

namespace fraclap {

// The seminorm restricted to functions supported on a subset S of the kernel window.
// Unknowns are the values on S; interactions with window nodes outside S are folded
// into the exterior weights: c_i = kappa_i + sum_{j in window \ S} w_ij.
class DomainOperator {
public:
  // S = mask nodes of d; d.box must equal the kernel window.
  DomainOperator(const LatticeDomain& d, const KernelWeights& k);
  // S = window nodes with keep[i] != 0.
  DomainOperator(const KernelWeights& k, const std::vector<std::uint8_t>& keep);

  std::size_t n() const { return nodes_.size(); }
  double p() const { return p_; }
  double volume() const { return vol_; }
  const Window& window() const { return window_; }
  const std::vector<std::size_t>& nodes() const { return nodes_; }
  PairView view() const { return PairView{nodes_.size(), p_, w_, c_}; }
  double weight(std::size_t i, std::size_t j) const { return w_[i * nodes_.size() + j]; }
  double exterior(std::size_t i) const { return c_[i]; }

  std::vector<double> restrict_values(const GridFunction& u) const;
  GridFunction expand(std::span<const double> x) const;

  // h^N sum |x|^p
  double lp_norm_p(std::span<const double> x) const;

private:
  void init(const KernelWeights& k, const std::vector<std::uint8_t>& keep);

  Window window_;
  double p_ = 2.0;
  double vol_ = 1.0;
  std::vector<std::size_t> nodes_;
  std::vector<double> w_;
  std::vector<double> c_;
};

// For a sign-changing v, everything needed to evaluate the seminorm and the sign-split
// pairings of t_+ v^+ + t_- v^- in O(#P * #N) per (t_+, t_-):
//   [t_+ v^+ + t_- v^-]^p = t_+^p a_pos + t_-^p a_neg + sum_cross cw |t_+ a + t_- b|^p
// where the cross list runs over pairs i in P = {v > 0}, j in N = {v < 0}, with
// a = v_i, b = |v_j| and cw = 2 w_ij.
struct SignDecomposition {
  double p = 2.0;
  double a_pos = 0.0;
  double a_neg = 0.0;
  double d_pos = 0.0; // h^N sum |v^+|^p
  double d_neg = 0.0;
  std::vector<double> cw;
  std::vector<double> ca;
  std::vector<double> cb;
  std::vector<std::size_t> pos_nodes;
  std::vector<std::size_t> neg_nodes;

  static SignDecomposition build(const DomainOperator& op, std::span<const double> v);

  // (1/p) <D[t_+ v^+ + t_- v^-]^p, v^+>  and the v^- twin
  double pairing_plus(double tp, double tm) const;
  double pairing_minus(double tp, double tm) const;
  // d pairing_plus / d(tp, tm) and d pairing_minus / d(tp, tm)
  void pairing_jacobian(double tp, double tm, double jac[2][2]) const;
  // [alpha v^+ + beta v^-]^p for real alpha, beta
  double seminorm(double alpha, double beta) const;
  // Quotients of v^+ + t v^-
  double quotient_plus(double t) const;
  double quotient_minus(double t) const;
};

} // namespace fraclap
