#include "fraclap/polarization.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fraclap {

namespace {

std::vector<std::size_t> mirror_map(const Window& win, const ReflectionParam& a) {
  if (!win.closed_under(a)) {
    throw PreconditionError("support window is not closed under the reflection");
  }
  std::vector<std::size_t> m(win.size());
  for (std::size_t i = 0; i < win.size(); ++i) {
    m[i] = *win.find(a.reflect(win.k1(i)), win.k2(i));
  }
  return m;
}

double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) {
    s += t;
  }
  return s;
}

} // namespace

GridFunction polarize(const GridFunction& u, const ReflectionParam& a, Variant variant) {
  const Window& win = u.window;
  const auto m = mirror_map(win, a);
  GridFunction out = u;
  for (std::size_t i = 0; i < win.size(); ++i) {
    int side = a.side(win.k1(i));
    if (variant == Variant::PTilde) {
      side = -side;
    }
    if (side > 0) {
      out.values[i] = std::min(u.values[i], u.values[m[i]]);
    } else if (side < 0) {
      out.values[i] = std::max(u.values[i], u.values[m[i]]);
    }
  }
  return out;
}

GridFunction reflect(const GridFunction& u, const ReflectionParam& a) {
  const auto m = mirror_map(u.window, a);
  GridFunction out = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.values[i] = u.values[m[i]];
  }
  return out;
}

IdentityReport polarization_identities_check(const GridFunction& u, const ReflectionParam& a, const Nonlinearity& nl) {
  IdentityReport rep;
  const GridFunction pu = polarize(u, a, Variant::P);
  const GridFunction up = u.pos();
  const GridFunction um = u.neg();
  const GridFunction pup = polarize(up, a, Variant::P);
  const GridFunction pum = polarize(um, a, Variant::P);
  const GridFunction tilde = polarize(um.scaled(-1.0), a, Variant::PTilde);
  const GridFunction pu_pos = pu.pos();
  const GridFunction pu_neg = pu.neg();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (pu_pos[i] + pu_neg[i] != pup[i] + pum[i]) {
      rep.expansion_violations.push_back(i);
    }
    if (pu[i] != pup[i] - tilde[i]) {
      rep.decomposition_violations.push_back(i);
    }
  }

  const double vol = cell_volume(u.window);
  const double p = nl.p();
  auto sums = [&](const GridFunction& v) {
    std::vector<double> out;
    for (const GridFunction& part : {v.pos(), v.neg()}) {
      std::vector<double> a1;
      std::vector<double> a2;
      std::vector<double> a3;
      for (double z : part.values) {
        a1.push_back(std::pow(std::abs(z), p));
        a2.push_back(nl.F(z));
        a3.push_back(nl.f(z) * z);
      }
      out.push_back(vol * sorted_sum(a1));
      out.push_back(vol * sorted_sum(a2));
      out.push_back(vol * sorted_sum(a3));
    }
    return out;
  };
  rep.sums_before = sums(u);
  rep.sums_after = sums(pu);
  for (std::size_t j = 0; j < rep.sums_before.size(); ++j) {
    const double b = rep.sums_before[j];
    const double d = std::abs(rep.sums_after[j] - b);
    rep.max_sum_rel_diff = std::max(rep.max_sum_rel_diff, d == 0.0 ? 0.0 : d / std::max(std::abs(b), 1e-300));
  }
  return rep;
}

PairingDeficit polarization_pairing_deficit(const GridFunction& u, const ReflectionParam& a, const KernelWeights& k) {
  if (!(u.window == k.window)) {
    throw PreconditionError("kernel window differs from the function window");
  }
  if (!check_kernel_condition(k, a)) {
    throw PreconditionError("kernel condition fails for this reflection");
  }
  const double p = k.p;
  const GridFunction pu = polarize(u, a, Variant::P);
  PairingDeficit d;
  const double g = gagliardo_p(u, k);
  d.deficit_plus = dpairing(u, u.pos(), k) - dpairing(pu, pu.pos(), k);
  d.deficit_minus = dpairing(u, u.neg(), k) - dpairing(pu, pu.neg(), k);
  d.seminorm_deficit = g - gagliardo_p(pu, k);
  double upow = 0.0;
  for (double z : u.values) {
    upow += std::pow(std::abs(z), p);
  }
  d.scale = p * g;
  d.eps_eq = 1e-10 * d.scale;
  d.tail_term = 2.0 * k.tau_kappa * upow;
  d.eps_num = d.eps_eq + d.tail_term;
  return d;
}

std::string to_string(EqualityCase c) {
  switch (c) {
  case EqualityCase::case_i:
    return "case_i";
  case EqualityCase::case_ii:
    return "case_ii";
  case EqualityCase::case_iii_plus:
    return "case_iii_plus";
  case EqualityCase::case_iii_minus:
    return "case_iii_minus";
  default:
    return "strict";
  }
}

EqualityReport equality_case(const GridFunction& u, const ReflectionParam& a, const KernelWeights& k) {
  EqualityReport rep;
  rep.deficits = polarization_pairing_deficit(u, a, k);
  const GridFunction pu = polarize(u, a, Variant::P);
  if (u == pu) {
    rep.cls = EqualityCase::case_i;
  } else if (reflect(u, a) == pu) {
    rep.cls = EqualityCase::case_ii;
  } else if (rep.deficits.deficit_plus <= rep.deficits.eps_eq && u.pos() == reflect(u.pos(), a)) {
    rep.cls = EqualityCase::case_iii_plus;
  } else if (rep.deficits.deficit_minus <= rep.deficits.eps_eq && u.neg() == reflect(u.neg(), a)) {
    rep.cls = EqualityCase::case_iii_minus;
  } else {
    rep.cls = EqualityCase::strict;
  }
  return rep;
}

} // namespace fraclap
