#include "fraclap/kernel.hpp"
#include "fraclap/pair_kernels.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <random>

using namespace fraclap;

namespace {

struct Fixture {
  KernelWeights k;
  PairView view;
  explicit Fixture(double p, int dim = 1) {
    const Window w = dim == 1 ? Window::symmetric(1, 1.0 / 32, {1.125, 0.0}) : Window::symmetric(2, 0.125, {1.0, 0.75});
    k = build_kernel(w, 0.5, p);
    view = PairView{k.size(), p, k.w, k.kappa};
  }
};

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) {
    x = d(rng);
  }
  return v;
}

// straight from the definition, no blocking, no symmetry tricks
double naive_seminorm(const PairView& k, const std::vector<double>& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.n; ++i) {
    for (std::size_t j = 0; j < k.n; ++j) {
      if (i != j) {
        s += k.w[i * k.n + j] * std::pow(std::abs(u[i] - u[j]), k.p);
      }
    }
    s += 2.0 * k.c[i] * std::pow(std::abs(u[i]), k.p);
  }
  return s;
}

} // namespace

TEST_CASE("serial and parallel kernels agree with the definition") {
  std::mt19937_64 rng(17);
  for (double p : {1.5, 2.0, 2.5, 3.0}) {
    for (int dim : {1, 2}) {
      Fixture f(p, dim);
      const std::size_t n = f.view.n;
      for (int t = 0; t < 5; ++t) {
        const auto u = random_vector(n, rng);
        const auto xi = random_vector(n, rng);
        const double ref = naive_seminorm(f.view, u);
        CHECK(serial::seminorm(f.view, u) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(parallel::seminorm(f.view, u) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(parallel::pairing(f.view, u, xi) ==
              doctest::Approx(serial::pairing(f.view, u, xi)).epsilon(1e-12));

        std::vector<double> gs(n), gp(n);
        const double vs = serial::seminorm_gradient(f.view, u, gs);
        const double vp = parallel::seminorm_gradient(f.view, u, gp);
        CHECK(vs == doctest::Approx(ref).epsilon(1e-12));
        CHECK(vp == doctest::Approx(ref).epsilon(1e-12));
        double gmax = 0.0;
        for (double g : gs) {
          gmax = std::max(gmax, std::abs(g));
        }
        for (std::size_t i = 0; i < n; ++i) {
          REQUIRE(std::abs(gs[i] - gp[i]) <= 1e-12 * gmax);
        }
        // gradient . xi is the pairing
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          dot += gs[i] * xi[i];
        }
        CHECK(dot == doctest::Approx(serial::pairing(f.view, u, xi)).epsilon(1e-11));

        SignSplit a, b;
        serial::sign_split(f.view, u, a);
        parallel::sign_split(f.view, u, b);
        CHECK(a.n_plus == doctest::Approx(b.n_plus).epsilon(1e-12));
        CHECK(a.n_minus == doctest::Approx(b.n_minus).epsilon(1e-12));
        // n_plus + n_minus = <D[u]^p, u>/p = [u]^p
        CHECK(a.n_plus + a.n_minus == doctest::Approx(ref).epsilon(1e-11));
        for (std::size_t i = 0; i < n; ++i) {
          REQUIRE(a.grad_plus[i] + a.grad_minus[i] == doctest::Approx(gs[i]).epsilon(1e-10).scale(gmax));
          REQUIRE(std::abs(a.grad_plus[i] - b.grad_plus[i]) <= 1e-12 * gmax);
        }
      }
    }
  }
}

TEST_CASE("parallel results do not depend on the thread count") {
  std::mt19937_64 rng(5);
  Fixture f(2.5, 2);
  const auto u = random_vector(f.view.n, rng);
  const auto xi = random_vector(f.view.n, rng);
  std::vector<double> ref_grad(f.view.n);
  omp_set_num_threads(1);
  const double s1 = parallel::seminorm(f.view, u);
  const double p1 = parallel::pairing(f.view, u, xi);
  parallel::seminorm_gradient(f.view, u, ref_grad);
  for (int threads : {2, 3, 4, 7}) {
    omp_set_num_threads(threads);
    std::vector<double> g(f.view.n);
    CHECK(parallel::seminorm(f.view, u) == s1);
    CHECK(parallel::pairing(f.view, u, xi) == p1);
    parallel::seminorm_gradient(f.view, u, g);
    CHECK(g == ref_grad);
  }
  omp_set_num_threads(1);
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(9);
  for (double p : {2.0, 3.0}) {
    Fixture f(p);
    const std::size_t n = f.view.n;
    auto u = random_vector(n, rng);
    std::vector<double> g(n);
    serial::seminorm_gradient(f.view, u, g);
    const double eps = 1e-6;
    for (std::size_t i = 0; i < n; i += 9) {
      const double keep = u[i];
      u[i] = keep + eps;
      const double up = serial::seminorm(f.view, u);
      u[i] = keep - eps;
      const double dn = serial::seminorm(f.view, u);
      u[i] = keep;
      CHECK((up - dn) / (2 * eps) == doctest::Approx(g[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("phi") {
  CHECK(phi(0.0, 1.5) == 0.0);
  CHECK(phi(-2.0, 3.0) == doctest::Approx(-4.0));
  CHECK(phi(4.0, 1.5) == doctest::Approx(2.0));
  CHECK(phi(-3.0, 2.0) == -3.0);
}
