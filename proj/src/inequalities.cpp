#include "fraclap/inequalities.hpp"

#include "fraclap/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

namespace fraclap {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }
double theta(double x) { return x > 0.0 ? 1.0 : 0.0; }

// Antiderivative of |x|^{p-2}: sign(x)|x|^{p-1}/(p-1)
double psi(double x, double p) {
  if (x == 0.0) {
    return 0.0;
  }
  return std::copysign(std::pow(std::abs(x), p - 1.0), x) / (p - 1.0);
}

// Integral of g over [lo, hi] split at the given interior points. Inside each piece g is
// smooth; at the ends it can behave like |x - c|^{p-1}. Tanh-sinh clusters its nodes at the
// ends and refines level by level until the tolerance is met, so it copes with both.
template <class G>
double piecewise(G g, double lo, double hi, std::vector<double> cuts, double& err_total) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x0 = std::max(lo, cuts[i]);
    const double x1 = std::min(hi, cuts[i + 1]);
    if (!(x1 > x0)) {
      continue;
    }
    double err = 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    sum += ts.integrate(g, x0, x1, 1e-13, &err);
    err_total += err;
  }
  return sum;
}

void check_input(const FourPointInput& in) {
  if (!(in.a < in.A) || !(in.b < in.B)) {
    throw PreconditionError("four-point input needs a < A and b < B");
  }
  if (!(in.p > 1.0)) {
    throw PreconditionError("four-point input needs p > 1");
  }
}

} // namespace

double four_point_J(double alpha, double beta, double p) {
  const double d = alpha - beta;
  if (d == 0.0) {
    return 0.0;
  }
  return std::pow(std::abs(d), p - 2.0) * d * (pos(alpha) - pos(beta));
}

double four_point_integral(const FourPointInput& in) {
  check_input(in);
  const double p = in.p;
  double err = 0.0;
  double total = 0.0;
  // theta(alpha) part: alpha in (max(a,0), A), inner beta-integral exact
  if (in.A > 0.0) {
    auto g = [&](double al) { return psi(al - in.b, p) - psi(al - in.B, p); };
    total += piecewise(g, std::max(in.a, 0.0), in.A, {in.b, in.B}, err);
  }
  if (in.B > 0.0) {
    auto g = [&](double be) { return psi(be - in.a, p) - psi(be - in.A, p); };
    total += piecewise(g, std::max(in.b, 0.0), in.B, {in.a, in.A}, err);
  }
  // 1e-9 keeps the error in both bounds well below tau_I, since |expr| >= (p-1)min(1,p-1) I
  if (!(err <= 1e-9 * (std::abs(total) + 1.0))) {
    std::ostringstream msg;
    msg << "quadrature for the four-point integral did not converge (error estimate " << err
        << "); move p away from 1 or split the rectangle further";
    throw ConvergenceError(msg.str());
  }
  return total;
}

FourPointResult four_point_check(const FourPointInput& in) {
  check_input(in);
  const double p = in.p;
  FourPointResult r;
  r.expr = four_point_J(in.A, in.B, p) - four_point_J(in.a, in.B, p) - four_point_J(in.A, in.b, p) +
           four_point_J(in.a, in.b, p);
  r.integral = four_point_integral(in);
  r.lower = -(p - 1.0) * std::max(1.0, p - 1.0) * r.integral;
  r.upper = -(p - 1.0) * std::min(1.0, p - 1.0) * r.integral;
  r.tau = 1e-8 * (std::abs(r.expr) + 1.0);
  r.equality = r.expr == 0.0;
  r.equality_expected = in.A <= 0.0 && in.B <= 0.0;
  r.ok = r.lower - r.tau <= r.expr && r.expr <= std::min(r.upper + r.tau, r.tau) && r.equality == r.equality_expected;
  return r;
}

double four_point_mixed_integral(const FourPointInput& in) {
  check_input(in);
  const double p = in.p;
  auto mixed = [p](double al, double be) {
    const double d = al - be;
    if (d == 0.0) {
      return 0.0;
    }
    const double q = (theta(al) * al - theta(be) * be) / d;
    return -(p - 1.0) * std::pow(std::abs(d), p - 2.0) * ((p - 2.0) * q + theta(al) + theta(be));
  };
  boost::math::quadrature::tanh_sinh<double> inner;
  double err = 0.0;
  auto row = [&](double al) {
    std::vector<double> cuts{in.b, 0.0, al, in.B};
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double x0 = std::max(in.b, cuts[i]);
      const double x1 = std::min(in.B, cuts[i + 1]);
      if (x1 > x0) {
        s += inner.integrate([&](double be) { return mixed(al, be); }, x0, x1);
      }
    }
    return s;
  };
  return piecewise(row, in.a, in.A, {0.0, in.b, in.B}, err);
}

A3Result pointwise_check_A3(double U, double V, double alpha, double beta, double p) {
  if (U * V > 0.0) {
    throw PreconditionError("pointwise inequality needs U V <= 0");
  }
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
    throw PreconditionError("(alpha, beta) must lie on the unit circle");
  }
  A3Result r;
  const double d = U - V;
  const double ap = std::pow(std::abs(alpha), p);
  const double bp = std::pow(std::abs(beta), p);
  r.lhs = d == 0.0 ? 0.0 : std::pow(std::abs(d), p - 2.0) * d * (ap * U - bp * V);
  r.rhs = std::pow(std::abs(alpha * U - beta * V), p);
  r.slack = r.lhs - r.rhs;
  r.scale = std::pow(std::abs(d), p);
  r.equality = std::abs(r.slack) <= 1e-12 * r.scale;
  r.equality_analytic = U * V == 0.0 || alpha == beta;
  r.ok = r.slack >= -1e-12 * r.scale;
  return r;
}

A4Result pointwise_check_A4(double U, double V, double s, double p) {
  if (U * V > 0.0) {
    throw PreconditionError("pointwise inequality needs U V <= 0");
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw PreconditionError("s must lie in [0,1]");
  }
  auto ph = [p](double t) { return t == 0.0 ? 0.0 : std::pow(std::abs(t), p - 2.0) * t; };
  A4Result r;
  r.slack1 = ph(U - V) * U - ph(U - s * V) * U;
  r.slack2 = ph(U - V) * (-V) - ph(s * U - V) * (-V);
  r.scale = std::pow(std::max(std::abs(U), std::abs(V)), p);
  r.ineq1_ok = r.slack1 >= -1e-12 * r.scale;
  r.ineq2_ok = r.slack2 >= -1e-12 * r.scale;
  return r;
}

InequalitySweep sweep_inequalities(double p, int samples, std::uint64_t seed) {
  if (samples < 1) {
    throw ParameterError("samples must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> corner(-3.0, 3.0);
  std::uniform_real_distribution<double> mag(0.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  InequalitySweep out;
  out.p = p;
  out.samples = samples;
  for (int i = 0; i < samples; ++i) {
    FourPointInput in;
    in.p = p;
    double x = corner(rng), y = corner(rng), z = corner(rng), w = corner(rng);
    in.a = std::min(x, y);
    in.A = std::max(x, y);
    in.b = std::min(z, w);
    in.B = std::max(z, w);
    if (in.a == in.A || in.b == in.B) {
      continue;
    }
    const FourPointResult r = four_point_check(in);
    out.four_point_failures += r.ok ? 0 : 1;
    out.four_point_equality_cases += r.equality_expected ? 1 : 0;
  }
  for (int i = 0; i < samples; ++i) {
    double U = mag(rng), V = -mag(rng);
    if (unit(rng) < 0.5) {
      std::swap(U, V);
    }
    const double th = 2.0 * std::numbers::pi * unit(rng);
    const A3Result r = pointwise_check_A3(U, V, std::cos(th), std::sin(th), p);
    out.a3_violations += r.ok ? 0 : 1;
    out.a3_equality_hits += r.equality ? 1 : 0;
    if (r.scale > 0.0) {
      out.worst_a3_slack = std::min(out.worst_a3_slack, r.slack / r.scale);
    }
  }
  for (int i = 0; i < samples; ++i) {
    double U = mag(rng), V = -mag(rng);
    if (unit(rng) < 0.5) {
      std::swap(U, V);
    }
    const A4Result r = pointwise_check_A4(U, V, unit(rng), p);
    out.a4_violations += (r.ineq1_ok && r.ineq2_ok) ? 0 : 1;
    if (r.scale > 0.0) {
      out.worst_a4_slack = std::min({out.worst_a4_slack, r.slack1 / r.scale, r.slack2 / r.scale});
    }
  }
  return out;
}

} // namespace fraclap
