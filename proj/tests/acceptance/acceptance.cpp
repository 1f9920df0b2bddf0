// One PASS/FAIL line per acceptance criterion. Usage: acceptance [criterion number]
// (no argument runs all nine). Exit code 0 iff every selected criterion passes.

#include "fraclap/eigensolver.hpp"
#include "fraclap/energy.hpp"
#include "fraclap/inequalities.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/nehari.hpp"
#include "fraclap/payne.hpp"
#include "fraclap/polarization.hpp"

#include "../support/dense_oracle.hpp"
#include "../support/equality_cases.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fraclap;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

constexpr double kH = 1.0 / 32;

LatticeDomain interval64() {
  return make_steiner_domain([](double) { return 1.0; }, Window::symmetric(1, kH, {1.125, 0.0}));
}

LatticeDomain stadium48x32() {
  return make_steiner_domain(
      [](double y) { return std::abs(y) < 0.85 ? 0.6 + std::sqrt(0.85 * 0.85 - y * y) : 0.0; },
      Window::symmetric(2, 1.0 / 16, {1.5, 1.0}));
}

// 128-node window and the functions of the rearrangement sweeps
const Window& window128() {
  static const Window w = Window::symmetric(1, kH, {2.0, 0.0});
  return w;
}

GridFunction random_on_window(const Window& hull, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  GridFunction u = GridFunction::zeros(window128());
  for (double& x : u.values) {
    x = d(rng);
  }
  return u.embedded(hull);
}

constexpr int kRandomFunctions = 200;
constexpr int kMaxHalfSteps = 16; // a = 0, h/2, ..., 8h

void rearrangement(Outcome& out) {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  long checks = 0;
  long node_violations = 0;
  for (double p : {1.5, 2.0, 3.0}) {
    const Nonlinearity nl = Nonlinearity::power(p, p + 1.0);
    for (int f = 0; f < kRandomFunctions; ++f) {
      for (int m = 0; m <= kMaxHalfSteps; ++m) {
        const ReflectionParam a(m, kH);
        const Window hull = window128().reflected_hull(a);
        const IdentityReport r = polarization_identities_check(random_on_window(hull, rng), a, nl);
        node_violations += static_cast<long>(r.expansion_violations.size() + r.decomposition_violations.size());
        worst = std::max(worst, r.max_sum_rel_diff);
        ++checks;
      }
    }
  }
  out.detail << checks << " (u, a, p) triples, node-wise identity violations " << node_violations
             << ", max relative change of the six sums " << worst;
  out.require(node_violations == 0, "node-wise identities");
  out.require(worst <= 1e-12, "sums preserved to 1e-12");
}

void monotone_coupling(Outcome& out) {
  std::mt19937_64 rng(202);
  long checks = 0;
  long sign_failures = 0;
  long sum_failures = 0;
  double worst_sum = 0.0;
  double worst_deficit = 0.0; // most negative deficit / eps_num
  for (double p : {1.5, 2.0, 3.0}) {
    std::vector<KernelWeights> kernels;
    for (int m = 0; m <= kMaxHalfSteps; ++m) {
      kernels.push_back(build_kernel(window128().reflected_hull(ReflectionParam(m, kH)), 0.5, p));
    }
    for (int f = 0; f < kRandomFunctions; ++f) {
      for (int m = 0; m <= kMaxHalfSteps; ++m) {
        const ReflectionParam a(m, kH);
        const KernelWeights& k = kernels[static_cast<std::size_t>(m)];
        const GridFunction u = random_on_window(k.window, rng);
        const PairingDeficit d = polarization_pairing_deficit(u, a, k);
        const double lo = std::min({d.deficit_plus, d.deficit_minus, d.seminorm_deficit});
        worst_deficit = std::min(worst_deficit, lo / d.eps_num);
        sign_failures += lo >= -d.eps_num ? 0 : 1;
        const double g = d.scale / p;
        const double rel = std::abs(d.seminorm_deficit - (d.deficit_plus + d.deficit_minus) / p) / g;
        worst_sum = std::max(worst_sum, rel);
        sum_failures += rel <= 1e-10 ? 0 : 1;
        ++checks;
      }
    }
  }
  int class_hits = 0;
  int class_total = 0;
  int consistency_failures = 0;
  std::string misclassified;
  const ReflectionParam a = testing::equality_reflection();
  const Window hull = testing::equality_window().reflected_hull(a);
  for (double p : {1.5, 2.0, 3.0}) {
    const KernelWeights k = build_kernel(hull, 0.5, p);
    for (const auto& s : testing::equality_samples()) {
      const EqualityReport r = equality_case(testing::equality_function(s), a, k);
      ++class_total;
      if (r.cls == s.expected) {
        ++class_hits;
      } else {
        misclassified += " " + s.name + "@p=" + std::to_string(p) + "->" + to_string(r.cls);
      }
      const auto& d = r.deficits;
      const bool plus_equal = d.deficit_plus <= d.eps_eq;
      const bool plus_class = r.cls == EqualityCase::case_i || r.cls == EqualityCase::case_ii ||
                              r.cls == EqualityCase::case_iii_plus;
      const bool strict_ok = r.cls != EqualityCase::strict || d.deficit_plus > d.eps_eq || d.deficit_minus > d.eps_eq;
      consistency_failures += (plus_equal == plus_class && strict_ok) ? 0 : 1;
    }
  }
  out.detail << checks << " deficit triples, min deficit/eps_num " << worst_deficit
             << ", max relative summation gap " << worst_sum << "; equality classes " << class_hits << "/"
             << class_total << " (20 hand-built cases at p = 1.5, 2, 3)";
  out.require(sign_failures == 0, std::to_string(sign_failures) + " deficits below -eps_num");
  out.require(sum_failures == 0, std::to_string(sum_failures) + " summation gaps above 1e-10");
  out.require(class_hits == class_total, "classification:" + misclassified);
  out.require(consistency_failures == 0, "trichotomy consistency");
}

void four_point(Outcome& out) {
  for (double p : {1.5, 2.0, 3.0}) {
    const InequalitySweep sw = sweep_inequalities(p, 10000, 303);
    out.detail << "p=" << p << ": failures " << sw.four_point_failures << ", equality cases "
               << sw.four_point_equality_cases << "; ";
    out.require(sw.four_point_failures == 0, "four-point bounds/equality at p=" + std::to_string(p));
    out.require(sw.four_point_equality_cases > 0, "no equality samples drawn");
  }
  const FourPointResult c = four_point_check({-1.0, 1.0, -1.0, 1.0, 2.0});
  out.detail << "corner case expr " << c.expr << " lower " << c.lower << " upper " << c.upper;
  out.require(std::abs(c.expr + 4.0) <= 1e-10 && std::abs(c.lower + 4.0) <= 1e-10 && std::abs(c.upper + 4.0) <= 1e-10,
              "p=2 corner case");
  out.require(c.ok, "corner case bounds");
}

void pointwise_sweeps(Outcome& out) {
  for (double p : {1.5, 2.0, 3.0}) {
    const InequalitySweep sw = sweep_inequalities(p, 100000, 404);
    out.detail << "p=" << p << ": A3 violations " << sw.a3_violations << " (worst slack " << sw.worst_a3_slack
               << "), A4 violations " << sw.a4_violations << "; ";
    out.require(sw.a3_violations == 0 && sw.a4_violations == 0, "pointwise sweep at p=" + std::to_string(p));
  }
  int mismatches = 0;
  int cases = 0;
  const double r = 1.0 / std::sqrt(2.0);
  for (double p : {1.5, 2.0, 3.0}) {
    auto check = [&](double U, double V, double al, double be, bool expect) {
      const A3Result a = pointwise_check_A3(U, V, al, be, p);
      ++cases;
      mismatches += (a.equality == expect && a.equality_analytic == expect) ? 0 : 1;
    };
    for (int t = 0; t < 16; ++t) {
      const double th = 2.0 * std::numbers::pi * (t + 0.37) / 16.0;
      const bool diagonal = std::abs(std::cos(th) - std::sin(th)) < 1e-12;
      check(0.0, -1.0 - 0.1 * t, std::cos(th), std::sin(th), true);
      check(0.5 + 0.1 * t, 0.0, std::cos(th), std::sin(th), true);
      check(1.0 + 0.1 * t, -2.0 + 0.05 * t, std::cos(th), std::sin(th), diagonal);
      check(-0.3 - 0.1 * t, 1.7, r, r, true);
      check(2.0, -0.2 - 0.1 * t, -r, -r, true);
    }
  }
  out.detail << "equality detector mismatches " << mismatches << "/" << cases;
  out.require(mismatches == 0, "A3 equality detector");
}

double odd_defect(const GridFunction& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    m = std::max(m, std::abs(u[i] + u[u.size() - 1 - i]));
  }
  return m / u.max_abs();
}

void spectral_oracle(Outcome& out) {
  const LatticeDomain d = interval64();
  for (double s : {0.25, 0.5, 0.75}) {
    const KernelWeights k = build_kernel(d.box, s, 2.0);
    const auto dense = testing::dense_p2_spectrum(kH, 1.125, 1.0, s);
    const FirstEigenpair first = first_eigenpair(d, k, 1e-10);
    EigenOptions o;
    o.tol = 1e-8;
    const EigenReport r = second_eigen_mu2(d, k, o);
    const double e1 = std::abs(first.lambda1 - dense.values(0)) / dense.values(0);
    const double e2 = std::abs(r.mu2 - dense.values(1)) / dense.values(1);
    const double odd = odd_defect(r.u2);
    out.detail << "s=" << s << ": lambda1 " << first.lambda1 << " (rel " << e1 << "), mu2 " << r.mu2 << " vs "
               << dense.values(1) << " (rel " << e2 << "), odd defect " << odd << "; ";
    out.require(e1 <= 1e-8, "lambda1 at s=" + std::to_string(s));
    out.require(e2 <= 1e-3, "mu2 at s=" + std::to_string(s));
    out.require(odd <= 1e-3, "antisymmetry at s=" + std::to_string(s));
  }
}

int curve_offset(const GridFunction& u, const KernelWeights& k) {
  constexpr int samples = 720;
  const auto curve = rayleigh_curve(u, k, samples);
  int arg = 0;
  for (int j = 1; j < samples; ++j) {
    if (curve[static_cast<std::size_t>(j)].value > curve[static_cast<std::size_t>(arg)].value) {
      arg = j;
    }
  }
  auto circ = [&](int a, int b) {
    const int dd = std::abs(a - b) % samples;
    return std::min(dd, samples - dd);
  };
  return std::min(circ(arg, samples / 8), circ(arg, 5 * samples / 8));
}

void eigen_identities(Outcome& out) {
  const LatticeDomain d = interval64();
  for (double p : {1.5, 3.0}) {
    const KernelWeights k = build_kernel(d.box, 0.5, p);
    const FirstEigenpair first = first_eigenpair(d, k, 1e-8);
    const EigenReport r = second_eigen_mu2(d, k, {});
    const double res = std::max(std::abs(r.residual_plus), std::abs(r.residual_minus));
    const int off = curve_offset(r.u2, k);
    out.detail << "p=" << p << ": lambda1 " << first.lambda1 << ", mu2 " << r.mu2 << ", residual/mu2 " << res / r.mu2
               << ", curve argmax offset " << off << "; ";
    out.require(res <= 1e-6 * r.mu2, "residuals at p=" + std::to_string(p));
    out.require(r.mu2 >= first.lambda1, "mu2 >= lambda1 at p=" + std::to_string(p));
    out.require(off <= 2, "Rayleigh curve maximum at p=" + std::to_string(p));
  }
}

void lens(Outcome& out) {
  const LatticeDomain d = interval64();
  for (double p : {1.5, 2.0, 3.0}) {
    const KernelWeights k = build_kernel(d.box, 0.5, p);
    const Nonlinearity nl = Nonlinearity::power(p, p + 1.0);
    const LensReport r = lens_minimize(d, nl, k, {});
    const GroundState gs = nehari_ground_state(d, nl, k, 1e-8);
    const double res = std::max(std::abs(r.residual_plus), std::abs(r.residual_minus)) / r.scale;
    const double rep = std::max(std::abs(r.reprojection.t_plus - 1.0), std::abs(r.reprojection.t_minus - 1.0));
    const double gap = r.g_identity_gap / std::abs(r.level);
    out.detail << "p=" << p << ": m " << r.level << " (ground " << gs.level << "), residual " << res
               << ", reprojection " << rep << ", G gap " << gap << "; ";
    const std::string tag = " at p=" + std::to_string(p);
    out.require(res <= 1e-8, "Nehari residuals" + tag);
    out.require(rep <= 1e-8, "reprojection" + tag);
    out.require(gap <= 1e-10, "G identity" + tag);
    out.require(r.level > gs.level, "level above ground state" + tag);
  }
}

GridFunction interior_control(const LatticeDomain& d, double radius) {
  // sign-changing, supported in |x| < radius: not a solution of anything
  const double rr = radius * radius;
  GridFunction u = GridFunction::zeros(d.box);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = d.box.x1(i);
    const double y = d.box.x2(i);
    const double r2 = x * x + y * y;
    if (d.inside(i) && r2 < rr) {
      u[i] = x * (rr - r2);
    }
  }
  return u;
}

void nodal_geometry(Outcome& out) {
  struct Case {
    std::string name;
    LatticeDomain d;
    double control_radius; // stadium half-height is 0.85
  };
  const std::vector<Case> domains = {{"interval", interval64(), 0.5}, {"stadium", stadium48x32(), 0.15}};
  for (const auto& [dname, d, control_radius] : domains) {
    const double h = d.box.h;
    for (double p : {2.0, 3.0}) {
      const KernelWeights k = build_kernel(d.box, 0.5, p);
      const EigenReport er = second_eigen_mu2(d, k, {});
      const Nonlinearity nl = Nonlinearity::power(p, p + 1.0);
      const LensReport lr = lens_minimize(d, nl, k, {});
      for (const auto& [what, u] : {std::pair<std::string, const GridFunction*>{"eigen", &er.u2},
                                    std::pair<std::string, const GridFunction*>{"lens", &lr.u}}) {
        const PayneReport r = payne_diagnostics(*u, d, 0.5, p, 1e-8, 2.0, 4);
        const std::string tag = dname + " " + what + " p=" + std::to_string(static_cast<int>(p));
        out.detail << tag << ": dist+ " << r.dist_plus / h << "h, dist- " << r.dist_minus / h << "h, nodal "
                   << r.dist_nodal / h << "h; ";
        out.require(r.dist_plus <= 2.0 * h + 1e-12 && r.dist_minus <= 2.0 * h + 1e-12, "support distance, " + tag);
        out.require(r.connected, "connected domain, " + tag);
        out.require(r.dist_nodal <= 2.0 * h + 1e-12, "nodal-cell distance, " + tag);
      }
    }
    const GridFunction c = interior_control(d, control_radius);
    const PayneReport rc = payne_diagnostics(c, d, 0.5, 2.0, 1e-8, 2.0, 0);
    const double cd = std::min(rc.dist_plus, rc.dist_minus);
    out.detail << dname << " control: min support distance " << cd / h << "h; ";
    out.require(cd >= 10.0 * h, "control distance, " + dname);
  }
}

void gradients(Outcome& out) {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Window w1 = Window::symmetric(1, kH, {1.125, 0.0});
  const Window w2 = Window::symmetric(2, 0.125, {1.0, 0.75});
  const double ps[] = {1.5, 2.0, 2.5, 3.0};
  double worst = 0.0;
  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    const double p = ps[t % 4];
    const Window& w = t % 2 == 0 ? w1 : w2;
    const KernelWeights k = build_kernel(w, 0.5, p);
    const std::size_t n = w.size();
    GridFunction u = GridFunction::zeros(w);
    GridFunction xi = GridFunction::zeros(w);
    if (p < 2.0) {
      // distinct values, spaced well apart and away from 0 (the exterior counts as 0)
      std::vector<double> vals(n);
      for (std::size_t i = 0; i < n; ++i) {
        vals[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n) * (i % 2 == 0 ? 1.0 : -1.0) +
                  0.2 * unit(rng) / static_cast<double>(n);
      }
      std::shuffle(vals.begin(), vals.end(), rng);
      u.values = vals;
      std::vector<double> sorted = vals;
      sorted.push_back(0.0);
      std::sort(sorted.begin(), sorted.end());
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < sorted.size(); ++i) {
        gap = std::min(gap, sorted[i] - sorted[i - 1]);
      }
      out.require(gap >= 1e-3 * u.max_abs(), "node differences below 1e-3 scale");
    } else {
      for (double& x : u.values) {
        x = unit(rng);
      }
    }
    for (double& x : xi.values) {
      x = unit(rng);
    }
    const double eps = 1e-6;
    const double fd = (gagliardo_p(u.plus(xi.scaled(eps)), k) - gagliardo_p(u.plus(xi.scaled(-eps)), k)) / (2 * eps);
    const double an = dpairing(u, xi, k);
    const double rel = std::abs(fd - an) / std::abs(an);
    worst = std::max(worst, rel);
    failures += rel <= 1e-5 ? 0 : 1;
  }
  out.detail << "100 (u, xi) pairs in 1D and 2D, p in {1.5, 2, 2.5, 3}: max relative error " << worst;
  out.require(failures == 0, std::to_string(failures) + " pairs above 1e-5");
}

struct Criterion {
  const char* name;
  std::function<void(Outcome&)> run;
};

} // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"rearrangement exactness", rearrangement},
      {"monotone coupling of polarization", monotone_coupling},
      {"four-point inequality", four_point},
      {"pointwise inequality sweeps", pointwise_sweeps},
      {"p = 2 spectral oracle", spectral_oracle},
      {"second-eigenfunction identities for p != 2", eigen_identities},
      {"least energy nodal solution", lens},
      {"supports and nodal set reach the boundary", nodal_geometry},
      {"gradient checks", gradients},
  };
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
      return 1;
    }
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) {
      continue;
    }
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
