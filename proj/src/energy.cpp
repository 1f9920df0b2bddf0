#include "fraclap/energy.hpp"

#include "fraclap/errors.hpp"
#include "fraclap/pair_kernels.hpp"

#include <cmath>

namespace fraclap {

namespace {

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ParameterError("exponent p must be in (1,inf)");
  }
}

// Values of u laid out on the kernel window.
std::vector<double> on_window(const GridFunction& u, const KernelWeights& k) {
  if (u.window == k.window) {
    return u.values;
  }
  if (!k.window.contains(u.window)) {
    throw PreconditionError("window mismatch: function support is not inside the kernel window");
  }
  return u.embedded(k.window).values;
}

PairView view(const KernelWeights& k) { return PairView{k.size(), k.p, k.w, k.kappa}; }

void check_same_p(const Nonlinearity& nl, const KernelWeights& k) {
  if (nl.p() != k.p) {
    throw ParameterError("nonlinearity and kernel use different exponents p");
  }
}

} // namespace

Nonlinearity Nonlinearity::resonant(double p, double lambda) {
  check_p(p);
  Nonlinearity nl;
  nl.kind_ = Kind::Resonant;
  nl.p_ = p;
  nl.lambda_ = lambda;
  nl.name_ = "resonant";
  return nl;
}

Nonlinearity Nonlinearity::power(double p, double q) {
  check_p(p);
  if (!(q > p)) {
    throw ParameterError("superhomogeneity violated");
  }
  Nonlinearity nl;
  nl.kind_ = Kind::Power;
  nl.p_ = p;
  nl.q_ = q;
  nl.name_ = "power";
  return nl;
}

Nonlinearity Nonlinearity::custom(double p, Fn f, Fn F, Fn fprime, std::string name, double growth) {
  check_p(p);
  if (!f || !F) {
    throw ParameterError("custom nonlinearity needs f and F");
  }
  if (F(0.0) != 0.0) {
    throw ParameterError("custom nonlinearity: F(0) must be 0");
  }
  // f(z)/(|z|^{p-2} z) on a log grid, from |z| = 1e-4 to 1e4
  for (int side : {1, -1}) {
    double prev = 0.0;
    for (int e = -80; e <= 80; ++e) {
      const double z = side * std::pow(10.0, 0.05 * e);
      const double r = f(z) / phi(z, p);
      if (!(r > 0.0) || !std::isfinite(r)) {
        throw ParameterError("custom nonlinearity: f(z)/(|z|^{p-2}z) must be positive");
      }
      if (e > -80 && r < prev * (1.0 - 1e-12)) {
        throw ParameterError("custom nonlinearity: f(z)/(|z|^{p-2}z) is not monotone away from 0");
      }
      prev = r;
    }
  }
  Nonlinearity nl;
  nl.kind_ = Kind::Custom;
  nl.p_ = p;
  nl.q_ = growth;
  nl.name_ = std::move(name);
  nl.f_ = std::move(f);
  nl.F_ = std::move(F);
  nl.fp_ = std::move(fprime);
  return nl;
}

double Nonlinearity::f(double z) const {
  switch (kind_) {
  case Kind::Resonant:
    return lambda_ * phi(z, p_);
  case Kind::Power:
    return phi(z, q_);
  default:
    return f_(z);
  }
}

double Nonlinearity::F(double z) const {
  switch (kind_) {
  case Kind::Resonant:
    return lambda_ * std::pow(std::abs(z), p_) / p_;
  case Kind::Power:
    return std::pow(std::abs(z), q_) / q_;
  default:
    return F_(z);
  }
}

double Nonlinearity::fprime(double z) const {
  if (z == 0.0 && kind_ != Kind::Custom) {
    return 0.0;
  }
  switch (kind_) {
  case Kind::Resonant:
    return lambda_ * (p_ - 1.0) * std::pow(std::abs(z), p_ - 2.0);
  case Kind::Power:
    return (q_ - 1.0) * std::pow(std::abs(z), q_ - 2.0);
  default:
    if (fp_) {
      return fp_(z);
    }
    const double step = 1e-6 * std::max(1.0, std::abs(z));
    return (f_(z + step) - f_(z - step)) / (2.0 * step);
  }
}

void Nonlinearity::check_subcritical(int dim, double s) const {
  if (q_ <= 0.0 || !(dim > p_ * s)) {
    return;
  }
  const double critical = dim * p_ / (dim - p_ * s);
  if (!(q_ < critical)) {
    throw ParameterError("exponent q must be below the critical exponent Np/(N-ps)");
  }
}

double gagliardo_p(const GridFunction& u, const KernelWeights& k) {
  const auto x = on_window(u, k);
  return parallel::seminorm(view(k), x);
}

double dpairing(const GridFunction& u, const GridFunction& xi, const KernelWeights& k) {
  const auto x = on_window(u, k);
  const auto y = on_window(xi, k);
  return parallel::pairing(view(k), x, y);
}

double energy(const GridFunction& u, const Nonlinearity& nl, const KernelWeights& k) {
  check_same_p(nl, k);
  double sf = 0.0;
  for (double z : u.values) {
    sf += nl.F(z);
  }
  return gagliardo_p(u, k) / k.p - cell_volume(u.window) * sf;
}

std::vector<double> de_residual(const GridFunction& u, const Nonlinearity& nl, const KernelWeights& k,
                                const std::vector<GridFunction>& directions) {
  check_same_p(nl, k);
  const auto x = on_window(u, k);
  const double vol = cell_volume(k.window);
  std::vector<double> out;
  out.reserve(directions.size());
  for (const auto& xi : directions) {
    const auto y = on_window(xi, k);
    double sf = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sf += nl.f(x[i]) * y[i];
    }
    out.push_back(parallel::pairing(view(k), x, y) / k.p - vol * sf);
  }
  return out;
}

std::vector<double> energy_gradient(const GridFunction& u, const Nonlinearity& nl, const KernelWeights& k) {
  check_same_p(nl, k);
  const auto x = on_window(u, k);
  std::vector<double> g(x.size());
  parallel::seminorm_gradient(view(k), x, g);
  const double vol = cell_volume(k.window);
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = g[i] / k.p - vol * nl.f(x[i]);
  }
  return g;
}

} // namespace fraclap
