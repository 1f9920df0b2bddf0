#pragma once
// p = 2 reference spectrum on a 1D interval, assembled from the kernel formulas directly
// (midpoint pair weights, closed-form tails) and handed to a dense symmetric eigensolver.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace fraclap::testing {

struct DenseSpectrum {
  std::vector<double> x;        // interval nodes
  Eigen::VectorXd values;       // ascending
  Eigen::MatrixXd vectors;      // columns, on the interval nodes
};

// Omega = (-half_length, half_length), window [-box, box], spacing h, order s.
// [u]^2 = sum_{i != j} w_ij (u_i - u_j)^2 + 2 sum kappa_i u_i^2 over the window with u = 0
// off Omega; the quotient with h sum u^2 is u^T M u / (h u^T u).
inline DenseSpectrum dense_p2_spectrum(double h, double box, double half_length, double s) {
  const int n_box = static_cast<int>(std::lround(2.0 * box / h));
  std::vector<double> xs(static_cast<std::size_t>(n_box));
  for (int i = 0; i < n_box; ++i) {
    xs[static_cast<std::size_t>(i)] = -box + (i + 0.5) * h;
  }
  const double nu = 2.0 * s;
  auto w = [&](double a, double b) { return h * h * std::pow(std::abs(a - b), -(1.0 + nu)); };
  auto kappa = [&](double a) { return h * (std::pow(box - a, -nu) + std::pow(box + a, -nu)) / nu; };

  DenseSpectrum out;
  std::vector<int> inside;
  for (int i = 0; i < n_box; ++i) {
    if (std::abs(xs[static_cast<std::size_t>(i)]) < half_length) {
      inside.push_back(i);
      out.x.push_back(xs[static_cast<std::size_t>(i)]);
    }
  }
  const int n = static_cast<int>(inside.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const double xa = xs[static_cast<std::size_t>(inside[static_cast<std::size_t>(a)])];
    double diag = kappa(xa);
    for (int j = 0; j < n_box; ++j) {
      if (j != inside[static_cast<std::size_t>(a)]) {
        diag += w(xa, xs[static_cast<std::size_t>(j)]);
      }
    }
    M(a, a) = 2.0 * diag;
    for (int b = 0; b < n; ++b) {
      if (a != b) {
        M(a, b) = -2.0 * w(xa, xs[static_cast<std::size_t>(inside[static_cast<std::size_t>(b)])]);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M / h);
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

} // namespace fraclap::testing
