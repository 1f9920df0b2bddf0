#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fraclap {

// A symmetric pair system on n unknowns: weights w (n x n, zero diagonal) and
// per-node exterior weights c. All sums below run over ordered pairs i != j.
struct PairView {
  std::size_t n = 0;
  double p = 2.0;
  std::span<const double> w;
  std::span<const double> c;
};

// Sign-split pairing terms used by the second-eigenvalue quotients:
//   n_plus  = sum w phi(u_i-u_j)(u+_i - u+_j) + 2 sum c phi(u_i) u+_i
//   n_minus = same with u^-
// and their gradients with respect to u.
struct SignSplit {
  double n_plus = 0.0;
  double n_minus = 0.0;
  std::vector<double> grad_plus;
  std::vector<double> grad_minus;
};

namespace serial {

// sum w |u_i-u_j|^p + 2 sum c |u_i|^p
double seminorm(const PairView& k, std::span<const double> u);
// p [ sum w phi(u_i-u_j)(xi_i-xi_j) + 2 sum c phi(u_i) xi_i ],  phi(t) = |t|^{p-2} t
double pairing(const PairView& k, std::span<const double> u, std::span<const double> xi);
// returns seminorm(u); grad = d seminorm / du
double seminorm_gradient(const PairView& k, std::span<const double> u, std::span<double> grad);
void sign_split(const PairView& k, std::span<const double> u, SignSplit& out);

} // namespace serial

// Same contracts. Pairs are grouped into a fixed set of row blocks; each block is
// summed on its own and the block results are added in block order, so the output
// does not depend on the number of threads.
namespace parallel {

double seminorm(const PairView& k, std::span<const double> u);
double pairing(const PairView& k, std::span<const double> u, std::span<const double> xi);
double seminorm_gradient(const PairView& k, std::span<const double> u, std::span<double> grad);
void sign_split(const PairView& k, std::span<const double> u, SignSplit& out);

} // namespace parallel

// |t|^{p-2} t with the value 0 at t = 0.
double phi(double t, double p);

} // namespace fraclap
