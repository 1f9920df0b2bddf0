#pragma once

#include "fraclap/grid_function.hpp"
#include "fraclap/kernel.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fraclap {

class Nonlinearity {
public:
  enum class Kind { Resonant, Power, Custom };
  using Fn = std::function<double(double)>;

  // f(z) = lambda |z|^{p-2} z
  static Nonlinearity resonant(double p, double lambda);
  // f(z) = |z|^{q-2} z, q > p
  static Nonlinearity power(double p, double q);
  // Arbitrary superhomogeneous f with primitive F. f' is optional (finite differences otherwise);
  // `growth` is the exponent q in |f(z)| <= C(1 + |z|^{q-1}), 0 if unknown.
  // Throws ParameterError unless f(z)/(|z|^{p-2}z) is sampled positive, nonincreasing on (-inf,0),
  // nondecreasing on (0,inf), and F(0) = 0.
  static Nonlinearity custom(double p, Fn f, Fn F, Fn fprime = {}, std::string name = "custom", double growth = 0.0);

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double lambda() const { return lambda_; }
  double q() const { return q_; }
  const std::string& name() const { return name_; }
  bool superhomogeneous() const { return kind_ != Kind::Resonant; }

  double f(double z) const;
  double F(double z) const;
  double fprime(double z) const;
  // G(z) = f(z) z - p F(z)
  double G(double z) const { return f(z) * z - p_ * F(z); }

  // Throws ParameterError when q >= p*_s = Np/(N-ps) (only meaningful when N > ps).
  void check_subcritical(int dim, double s) const;

private:
  Kind kind_ = Kind::Resonant;
  double p_ = 2.0;
  double lambda_ = 0.0;
  double q_ = 0.0;
  std::string name_;
  Fn f_;
  Fn F_;
  Fn fp_;
};

// [u]_p^p on the kernel's window (u may live on a sub-window).
double gagliardo_p(const GridFunction& u, const KernelWeights& k);
// <D[u]_p^p, xi>
double dpairing(const GridFunction& u, const GridFunction& xi, const KernelWeights& k);
// (1/p)[u]_p^p - h^N sum F(u_i)
double energy(const GridFunction& u, const Nonlinearity& nl, const KernelWeights& k);
// (1/p) dpairing(u, xi) - h^N sum f(u_i) xi_i for each direction
std::vector<double> de_residual(const GridFunction& u, const Nonlinearity& nl, const KernelWeights& k,
                                const std::vector<GridFunction>& directions);

// Dirichlet-energy gradient dE/du_k for every node of the kernel window.
std::vector<double> energy_gradient(const GridFunction& u, const Nonlinearity& nl, const KernelWeights& k);

} // namespace fraclap
