#include "fraclap/energy.hpp"
#include "fraclap/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fraclap;

namespace {

GridFunction random_function(const Window& w, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  GridFunction u = GridFunction::zeros(w);
  for (double& x : u.values) {
    x = d(rng);
  }
  return u;
}

} // namespace

TEST_CASE("nonlinearities") {
  const Nonlinearity pw = Nonlinearity::power(2.0, 3.0);
  CHECK(pw.f(-2.0) == doctest::Approx(-4.0));
  CHECK(pw.F(2.0) == doctest::Approx(8.0 / 3.0));
  CHECK(pw.G(2.0) == doctest::Approx(8.0 - 2.0 * 8.0 / 3.0));
  CHECK(pw.superhomogeneous());
  for (double z : {-1.7, -0.2, 0.3, 2.1}) {
    const double e = 1e-6;
    CHECK(pw.fprime(z) == doctest::Approx((pw.f(z + e) - pw.f(z - e)) / (2 * e)).epsilon(1e-7));
    CHECK(pw.f(z) == doctest::Approx((pw.F(z + e) - pw.F(z - e)) / (2 * e)).epsilon(1e-7));
  }

  const Nonlinearity res = Nonlinearity::resonant(3.0, 2.0);
  CHECK_FALSE(res.superhomogeneous());
  CHECK(res.f(-2.0) == doctest::Approx(-8.0));

  CHECK_THROWS_WITH_AS(Nonlinearity::power(2.0, 2.0), "superhomogeneity violated", ParameterError);
  CHECK_THROWS_WITH_AS(Nonlinearity::power(3.0, 2.5), "superhomogeneity violated", ParameterError);

  // custom: z + z^3 on p = 2 has ratio 1 + z^2, fine
  CHECK_NOTHROW(Nonlinearity::custom(
      2.0, [](double z) { return z + z * z * z; }, [](double z) { return 0.5 * z * z + 0.25 * z * z * z * z; }));
  // ratio decreasing away from 0
  CHECK_THROWS_AS(Nonlinearity::custom(
                      2.0, [](double z) { return std::atan(z); },
                      [](double z) { return z * std::atan(z) - 0.5 * std::log1p(z * z); }),
                  ParameterError);
  // F(0) != 0
  CHECK_THROWS_AS(Nonlinearity::custom(
                      2.0, [](double z) { return z * z * z; }, [](double z) { return 1.0 + 0.25 * z * z * z * z; }),
                  ParameterError);
}

TEST_CASE("critical exponent") {
  // N = 2, s = 1/2, p = 2: p* = 4
  CHECK_NOTHROW(Nonlinearity::power(2.0, 3.9).check_subcritical(2, 0.5));
  CHECK_THROWS_AS(Nonlinearity::power(2.0, 4.0).check_subcritical(2, 0.5), ParameterError);
  // N <= ps: every q is allowed
  CHECK_NOTHROW(Nonlinearity::power(2.0, 50.0).check_subcritical(1, 0.5));
}

TEST_CASE("energy and its derivatives") {
  std::mt19937_64 rng(3);
  const Window w = Window::symmetric(1, 1.0 / 16, {1.0, 0.0});
  for (double p : {1.5, 2.0, 3.0}) {
    const KernelWeights k = build_kernel(w, 0.5, p);
    const Nonlinearity nl = Nonlinearity::power(p, p + 1.0);
    const GridFunction u = random_function(w, rng);
    const GridFunction xi = random_function(w, rng);

    // homogeneity: [cu]^p = |c|^p [u]^p and <D[u]^p, u> = p [u]^p
    CHECK(gagliardo_p(u.scaled(-2.0), k) == doctest::Approx(std::pow(2.0, p) * gagliardo_p(u, k)).epsilon(1e-12));
    CHECK(dpairing(u, u, k) == doctest::Approx(p * gagliardo_p(u, k)).epsilon(1e-12));

    double fsum = 0.0;
    for (double v : u.values) {
      fsum += nl.F(v);
    }
    CHECK(energy(u, nl, k) == doctest::Approx(gagliardo_p(u, k) / p - w.h * fsum).epsilon(1e-12));

    const auto r = de_residual(u, nl, k, {xi, u});
    double fx = 0.0, fu = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      fx += nl.f(u[i]) * xi[i];
      fu += nl.f(u[i]) * u[i];
    }
    CHECK(r[0] == doctest::Approx(dpairing(u, xi, k) / p - w.h * fx).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(gagliardo_p(u, k) - w.h * fu).epsilon(1e-12));

    const auto g = energy_gradient(u, nl, k);
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      dot += g[i] * xi[i];
    }
    CHECK(dot == doctest::Approx(r[0]).epsilon(1e-10));
  }
}

TEST_CASE("functions on a sub-window") {
  const Window big = Window::symmetric(1, 1.0 / 16, {1.0, 0.0});
  const Window small = Window::symmetric(1, 1.0 / 16, {0.5, 0.0});
  GridFunction u = GridFunction::zeros(small);
  u[3] = 1.0;
  const KernelWeights k = build_kernel(big, 0.5, 2.0);
  CHECK(gagliardo_p(u, k) == gagliardo_p(u.embedded(big), k));
  const KernelWeights ks = build_kernel(small, 0.5, 2.0);
  CHECK_THROWS_AS(gagliardo_p(u.embedded(big), ks), PreconditionError);
  const Nonlinearity other = Nonlinearity::power(3.0, 4.0);
  CHECK_THROWS_AS(energy(u, other, k), ParameterError);
}
