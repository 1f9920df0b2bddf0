#include "fraclap/eigensolver.hpp"
#include "fraclap/energy.hpp"
#include "fraclap/errors.hpp"

#include "../support/dense_oracle.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>

using namespace fraclap;

namespace {

LatticeDomain interval(double h, double box, double half_length) {
  return make_steiner_domain([=](double) { return half_length; }, Window::symmetric(1, h, {box, 0.0}));
}

double odd_defect(const GridFunction& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    m = std::max(m, std::abs(u[i] + u[u.size() - 1 - i]));
  }
  return m / u.max_abs();
}

} // namespace

TEST_CASE("p = 2 eigenvalues match the dense matrix") {
  const double h = 1.0 / 16;
  const LatticeDomain d = interval(h, 1.125, 1.0);
  for (double s : {0.3, 0.6}) {
    const KernelWeights k = build_kernel(d.box, s, 2.0);
    const auto dense = testing::dense_p2_spectrum(h, 1.125, 1.0, s);
    const FirstEigenpair first = first_eigenpair(d, k, 1e-10);
    CHECK(first.lambda1 == doctest::Approx(dense.values(0)).epsilon(1e-9));
    // first eigenfunction is positive and even
    for (std::size_t i = 0; i < first.u1.size(); ++i) {
      CHECK(first.u1[i] >= 0.0);
      if (d.inside(i)) {
        CHECK(first.u1[i] > 0.0);
      }
    }
    CHECK(lp_norm_p(first.u1, 2.0) == doctest::Approx(1.0));

    EigenOptions o;
    o.tol = 1e-9;
    const EigenReport r = second_eigen_mu2(d, k, o);
    CHECK(r.mu2 == doctest::Approx(dense.values(1)).epsilon(1e-6));
    CHECK(odd_defect(r.u2) < 1e-4);
    CHECK(r.u2.has_positive());
    CHECK(r.u2.has_negative());
    CHECK(r.quotient_plus == doctest::Approx(r.quotient_minus).epsilon(1e-9));
  }
}

TEST_CASE("p != 2: ordering, identities and the Rayleigh curve") {
  const LatticeDomain d = interval(1.0 / 16, 1.125, 1.0);
  for (double p : {1.5, 3.0}) {
    const KernelWeights k = build_kernel(d.box, 0.5, p);
    const FirstEigenpair first = first_eigenpair(d, k, 1e-9);
    EigenOptions o;
    const EigenReport r = second_eigen_mu2(d, k, o);
    CHECK(r.mu2 > first.lambda1);
    CHECK(std::abs(r.residual_plus) <= 1e-6 * r.mu2);
    CHECK(std::abs(r.residual_minus) <= 1e-6 * r.mu2);
    const SecondEigenCheck c = verify_second_eigen(r.u2, r.mu2, k, 1e-6);
    CHECK(c.identities_ok);
    const auto curve = rayleigh_curve(r.u2, k, 720);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < curve.size(); ++j) {
      if (curve[j].value > curve[arg].value) {
        arg = j;
      }
    }
    const int off = std::min(std::abs(static_cast<int>(arg) - 90), std::abs(static_cast<int>(arg) - 450));
    CHECK(off <= 2);
    // the curve takes the value mu2 on the diagonal
    CHECK(curve[90].value == doctest::Approx(r.mu2).epsilon(1e-6));
  }
}

TEST_CASE("second eigenfunction check against a reference") {
  const LatticeDomain d = interval(1.0 / 16, 1.125, 1.0);
  const KernelWeights k = build_kernel(d.box, 0.5, 2.0);
  const EigenReport r = second_eigen_mu2(d, k, {});
  const SecondEigenCheck self = verify_second_eigen(r.u2, r.mu2, k, 1e-6, &r.u2);
  CHECK(self.has_reference);
  CHECK(self.equivalent);
  // a wrong eigenvalue breaks the identities
  const SecondEigenCheck off = verify_second_eigen(r.u2, 1.1 * r.mu2, k, 1e-6);
  CHECK_FALSE(off.identities_ok);
  GridFunction pos = r.u2.pos();
  CHECK_THROWS_AS(verify_second_eigen(pos, r.mu2, k, 1e-6), PreconditionError);
}

TEST_CASE("reports are reproducible and thread-count independent") {
  const LatticeDomain d = interval(1.0 / 16, 1.125, 1.0);
  const KernelWeights k = build_kernel(d.box, 0.5, 3.0);
  EigenOptions o;
  o.seed = 42;
  omp_set_num_threads(1);
  const EigenReport a = second_eigen_mu2(d, k, o);
  omp_set_num_threads(3);
  const EigenReport b = second_eigen_mu2(d, k, o);
  omp_set_num_threads(1);
  CHECK(a.mu2 == b.mu2);
  CHECK(a.u2 == b.u2);
  CHECK(a.multistart_id == b.multistart_id);
  CHECK(a.outcomes.size() == 3);
}

TEST_CASE("a 2D domain") {
  const Window box = Window::symmetric(2, 0.125, {1.0, 0.75});
  const LatticeDomain d = make_steiner_domain([](double y) { return std::abs(y) < 0.5 ? 0.75 : 0.0; }, box);
  const KernelWeights k = build_kernel(box, 0.5, 2.0);
  const FirstEigenpair first = first_eigenpair(d, k, 1e-9);
  const EigenReport r = second_eigen_mu2(d, k, {});
  CHECK(r.mu2 > first.lambda1);
  CHECK(r.u2.supported_in(d));
  CHECK(r.converged);
}
