#pragma once

#include "fraclap/lattice.hpp"

#include <filesystem>
#include <vector>

namespace fraclap {

// Pair weights w(i,j) ~ h^{2N} |x_i - x_j|^{-(N+ps)} on a window, plus the exterior
// tails kappa_i ~ h^N * integral of |x_i - y|^{-(N+ps)} over the complement of the window.
struct KernelWeights {
  double s = 0.5;
  double p = 2.0;
  Window window;
  std::vector<double> w;     // n x n, row-major, zero diagonal
  std::vector<double> kappa; // n
  double tau_kappa = 0.0;    // recorded absolute error bound on each kappa_i

  std::size_t size() const { return kappa.size(); }
  double operator()(std::size_t i, std::size_t j) const { return w[i * kappa.size() + j]; }

  // Arbitrary weights, mainly for exercising check_kernel_condition.
  static KernelWeights custom(const Window& window, double s, double p, std::vector<double> w,
                              std::vector<double> kappa);
};

void check_order_and_exponent(double s, double p);

KernelWeights build_kernel(const Window& window, double s, double p);

// build_kernel backed by a binary file in `cache_dir`, keyed by (window, s, p).
KernelWeights build_kernel_cached(const Window& window, double s, double p, const std::filesystem::path& cache_dir);

// kappa_i / h^N for node i: the tail integral itself.
double exterior_tail_integral(const Window& window, std::size_t i, double nu);

// Strict reflection monotonicity on Sigma_a^+, symmetry of w, positivity, and
// mirror symmetry of the tails. Throws PreconditionError if the window is not sigma_a-closed.
bool check_kernel_condition(const KernelWeights& k, const ReflectionParam& a);

} // namespace fraclap
