#pragma once

#include "fraclap/grid_function.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/lattice.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fraclap {

struct FirstEigenpair {
  double lambda1 = 0.0;
  GridFunction u1; // >= 0, h^N sum u1^p = 1
  double residual = 0.0; // max_k |(1/p) dG/du_k - lambda1 h^N phi(u_k)| / (lambda1 h^N max u^{p-1})
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

// Minimizes [u]^p / (h^N sum |u|^p) over functions on the mask of d (p taken from k).
// Throws ConvergenceError when neither the residual test nor stagnation stops it.
FirstEigenpair first_eigenpair(const LatticeDomain& d, const KernelWeights& k, double tol, int max_iter = 5000);

struct EigenOptions {
  double tol = 1e-8;
  int multistarts = 3;
  std::uint64_t seed = 0;
  int max_iter = 4000;
};

struct MultistartOutcome {
  int id = 0;
  std::string profile;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  bool ok = false; // run finished with a sign-changing iterate
  std::string error;
};

struct EigenReport {
  double lambda1 = 0.0;
  double mu2 = 0.0;
  GridFunction u2; // h^N sum |u2|^p = 1
  double quotient_plus = 0.0;
  double quotient_minus = 0.0;
  double residual_plus = 0.0;  // mu2 h^N sum|u2^+|^p - (1/p) <D[u2]^p, u2^+>
  double residual_minus = 0.0;
  double stationarity = 0.0;   // relative eigen-equation residual over all nodes
  int iterations = 0;
  int multistart_id = 0;
  bool converged = false;
  std::vector<MultistartOutcome> outcomes;
  std::vector<double> history;
};

// mu2 = inf max{Q_+(v), Q_-(v)} with Q_+- = (1/p)<D[v]^p, v^+->/(h^N sum |v^+-|^p).
// Each iterate is balanced (Q_+ = Q_-) by rescaling v^-, and then normalized.
// Throws ConvergenceError("no sign-changing minimizer found") if every start collapses.
EigenReport second_eigen_mu2(const LatticeDomain& d, const KernelWeights& k, const EigenOptions& opt);

struct SecondEigenCheck {
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  double rel_plus = 0.0;
  double rel_minus = 0.0;
  bool identities_ok = false;
  bool has_reference = false;
  bool comparison_ok = false;
  bool equivalent = false; // comparison with the reference holds within tol
};

// Throws PreconditionError unless v changes sign.
SecondEigenCheck verify_second_eigen(const GridFunction& v, double lambda, const KernelWeights& k, double tol,
                                     const GridFunction* reference = nullptr);

struct CurvePoint {
  double alpha = 0.0;
  double beta = 0.0;
  double value = 0.0;
};

// [alpha v^+ + beta v^-]^p / (|alpha|^p |v^+|_p^p + |beta|^p |v^-|_p^p) at
// (alpha, beta) = (cos 2 pi k / samples, sin 2 pi k / samples).
std::vector<CurvePoint> rayleigh_curve(const GridFunction& v, const KernelWeights& k, int samples);

} // namespace fraclap
