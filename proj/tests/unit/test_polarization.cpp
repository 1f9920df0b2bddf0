#include "fraclap/errors.hpp"
#include "fraclap/polarization.hpp"

#include "../support/equality_cases.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fraclap;

namespace {

GridFunction random_on(const Window& w, const Window& support, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  GridFunction u = GridFunction::zeros(support);
  for (double& x : u.values) {
    x = d(rng);
  }
  return u.embedded(w);
}

} // namespace

TEST_CASE("polarize takes min on the far side and max on the near side") {
  const Window w = Window::symmetric(1, 0.25, {1.0, 0.0});
  const ReflectionParam a(2, 0.25); // a = 0.25
  const Window hull = w.reflected_hull(a);
  std::mt19937_64 rng(1);
  const GridFunction u = random_on(hull, w, rng);
  const GridFunction pu = polarize(u, a, Variant::P);
  const GridFunction pt = polarize(u, a, Variant::PTilde);
  const GridFunction ru = reflect(u, a);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int side = a.side(hull.k1(i));
    if (side > 0) {
      CHECK(pu[i] == std::min(u[i], ru[i]));
      CHECK(pt[i] == std::max(u[i], ru[i]));
    } else if (side < 0) {
      CHECK(pu[i] == std::max(u[i], ru[i]));
      CHECK(pt[i] == std::min(u[i], ru[i]));
    }
  }
  // idempotent, and P of the reflection is P
  CHECK(polarize(pu, a, Variant::P) == pu);
  CHECK(polarize(ru, a, Variant::P) == pu);
  CHECK(reflect(reflect(u, a), a) == u);
  CHECK_THROWS_AS(polarize(u, ReflectionParam(40, 0.25), Variant::P),
                  PreconditionError);
}

TEST_CASE("rearrangement identities on random functions") {
  std::mt19937_64 rng(2);
  const Window w = Window::symmetric(1, 1.0 / 32, {2.0, 0.0});
  for (double p : {1.5, 2.0, 3.0}) {
    const Nonlinearity nl = Nonlinearity::power(p, p + 1.0);
    for (int m = 0; m <= 16; m += 3) {
      const ReflectionParam a(m, w.h);
      const Window hull = w.reflected_hull(a);
      for (int t = 0; t < 10; ++t) {
        const IdentityReport r = polarization_identities_check(random_on(hull, w, rng), a, nl);
        CHECK(r.ok());
        CHECK(r.sums_before.size() == 6);
      }
    }
  }
}

TEST_CASE("pairing deficits are nonnegative and add up") {
  std::mt19937_64 rng(6);
  const Window w = Window::symmetric(1, 1.0 / 32, {2.0, 0.0});
  for (double p : {1.5, 2.0, 3.0}) {
    for (int m : {0, 1, 5, 16}) {
      const ReflectionParam a(m, w.h);
      const Window hull = w.reflected_hull(a);
      const KernelWeights k = build_kernel(hull, 0.5, p);
      for (int t = 0; t < 4; ++t) {
        const GridFunction u = random_on(hull, w, rng);
        const PairingDeficit d = polarization_pairing_deficit(u, a, k);
        CHECK(d.deficit_plus >= -d.eps_num);
        CHECK(d.deficit_minus >= -d.eps_num);
        CHECK(d.seminorm_deficit >= -d.eps_num);
        const double g = gagliardo_p(u, k);
        CHECK(std::abs(d.seminorm_deficit - (d.deficit_plus + d.deficit_minus) / p) <= 1e-10 * g);
      }
    }
  }
  const KernelWeights k = build_kernel(w, 0.5, 2.0);
  GridFunction u = GridFunction::zeros(w);
  u[3] = 1.0;
  CHECK_THROWS_AS(polarization_pairing_deficit(u, ReflectionParam(2, w.h), k), PreconditionError);
}

TEST_CASE("equality classes of hand-built functions") {
  const ReflectionParam a = testing::equality_reflection();
  const Window hull = testing::equality_window().reflected_hull(a);
  for (double p : {2.0, 3.0}) {
    const KernelWeights k = build_kernel(hull, 0.5, p);
    for (const auto& s : testing::equality_samples()) {
      CAPTURE(s.name);
      CAPTURE(p);
      const EqualityReport r = equality_case(testing::equality_function(s), a, k);
      CHECK(to_string(r.cls) == to_string(s.expected));
      const auto& d = r.deficits;
      const bool plus_equal = d.deficit_plus <= d.eps_eq;
      const bool in_plus_classes = r.cls == EqualityCase::case_i || r.cls == EqualityCase::case_ii ||
                                   r.cls == EqualityCase::case_iii_plus;
      CHECK(plus_equal == in_plus_classes);
      if (r.cls == EqualityCase::strict) {
        CHECK((d.deficit_plus > d.eps_eq || d.deficit_minus > d.eps_eq));
      }
      if (r.cls == EqualityCase::case_iii_plus) {
        CHECK(d.deficit_minus > d.eps_eq);
      }
      if (r.cls == EqualityCase::case_iii_minus) {
        CHECK(d.deficit_minus <= d.eps_eq);
        CHECK(d.deficit_plus > d.eps_eq);
      }
    }
  }
}
