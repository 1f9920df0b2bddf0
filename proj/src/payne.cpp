#include "fraclap/payne.hpp"

#include "fraclap/eigensolver.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/nehari.hpp"
#include "fraclap/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace fraclap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridFunction on_box(const GridFunction& u, const LatticeDomain& d) {
  if (u.window == d.box) {
    return u;
  }
  return d.box.contains(u.window) ? u.embedded(d.box) : u.restricted(d.box);
}

// Face neighbours of idx inside the window.
template <class F>
void for_neighbours(const Window& w, std::size_t idx, F&& fn) {
  const int c = w.col(idx);
  const int r = w.row(idx);
  if (c > 0) {
    fn(w.index(c - 1, r));
  }
  if (c + 1 < w.n1) {
    fn(w.index(c + 1, r));
  }
  if (w.dim == 2) {
    if (r > 0) {
      fn(w.index(c, r - 1));
    }
    if (r + 1 < w.n2) {
      fn(w.index(c, r + 1));
    }
  }
}

double set_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, const Window& w) {
  double best = kInf;
  for (std::size_t i : a) {
    const auto xi = w.coords(i);
    for (std::size_t j : b) {
      const auto xj = w.coords(j);
      best = std::min(best, std::hypot(xi[0] - xj[0], xi[1] - xj[1]));
    }
  }
  return best;
}

} // namespace

SupportSets support_sets(const GridFunction& u_in, const LatticeDomain& d, double tau_rel) {
  if (!(tau_rel >= 0.0)) {
    throw ParameterError("tau_rel must be nonnegative");
  }
  const GridFunction u = on_box(u_in, d);
  const double m = u.max_abs();
  if (m == 0.0) {
    throw PreconditionError("function vanishes identically");
  }
  SupportSets out;
  out.tau = tau_rel * m;
  const double tau = out.tau;
  auto sgn = [&](double v) { return v > tau ? 1 : (v < -tau ? -1 : 0); };
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int si = sgn(u[i]);
    if (si > 0) {
      out.plus.push_back(i);
    } else if (si < 0) {
      out.minus.push_back(i);
    }
    if (!d.inside(i)) {
      continue;
    }
    bool nodal = si == 0;
    for_neighbours(d.box, i, [&](std::size_t j) {
      if (d.inside(j) && si != 0 && sgn(u[j]) == -si) {
        nodal = true;
      }
    });
    if (nodal) {
      out.nodal.push_back(i);
    }
  }
  return out;
}

double support_distance(const std::vector<std::size_t>& support, const LatticeDomain& d) {
  if (support.empty()) {
    throw PreconditionError("empty support");
  }
  return set_distance(support, discrete_boundary(d), d.box);
}

double slide_distance(const std::vector<std::size_t>& support, const LatticeDomain& d) {
  if (support.empty()) {
    throw PreconditionError("empty support");
  }
  const Window& w = d.box;
  for (std::size_t i : support) {
    if (!d.inside(i)) {
      throw PreconditionError("support is not contained in the domain");
    }
  }
  int k = 0;
  for (;; ++k) {
    bool fits = true;
    for (std::size_t i : support) {
      const int c = w.col(i) + k + 1;
      if (c >= w.n1 || !d.inside(w.index(c, w.row(i)))) {
        fits = false;
        break;
      }
    }
    if (!fits) {
      break;
    }
  }
  return k * w.h;
}

std::vector<std::array<double, 2>> reflection_chain(std::array<double, 2> x, const ReflectionParam& a,
                                                    const Window& window, int max_iter) {
  if (!(a.value() > 0.0)) {
    throw ParameterError("reflection chain needs a > 0");
  }
  auto outside = [&](const std::array<double, 2>& y) {
    return y[0] < window.x1_lo_edge() || y[0] > window.x1_hi_edge() ||
           (window.dim == 2 && (y[1] < window.x2_lo_edge() || y[1] > window.x2_hi_edge()));
  };
  std::vector<std::array<double, 2>> out;
  for (int it = 0; it < max_iter; ++it) {
    x[0] = it % 2 == 0 ? a.reflect(x[0]) : -x[0];
    out.push_back(x);
    if (outside(x)) {
      break;
    }
  }
  return out;
}

bool mask_connected(const LatticeDomain& d) {
  const auto nodes = d.nodes();
  if (nodes.empty()) {
    return false;
  }
  std::vector<std::uint8_t> seen(d.box.size(), 0);
  std::deque<std::size_t> queue{nodes.front()};
  seen[nodes.front()] = 1;
  std::size_t count = 0;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    ++count;
    for_neighbours(d.box, i, [&](std::size_t j) {
      if (d.inside(j) && !seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
    });
  }
  return count == nodes.size();
}

LidTouch lid_touch(const std::vector<std::size_t>& support, const LatticeDomain& d, double threshold) {
  const BoundaryLids lids = boundary_lids(d);
  LidTouch t;
  t.left = set_distance(support, lids.left, d.box);
  t.right = set_distance(support, lids.right, d.box);
  t.cylinder = set_distance(support, lids.cylinder, d.box);
  t.touches_left = t.left <= threshold;
  t.touches_right = t.right <= threshold;
  t.touches_cylinder = t.cylinder <= threshold;
  return t;
}

PayneReport payne_diagnostics(const GridFunction& u_in, const LatticeDomain& d, double s, double p, double tau_rel,
                              double threshold_h, int sweep_half_steps, const std::string& kernel_cache) {
  if (!check_steiner(d)) {
    throw DomainError("domain is not Steiner symmetric");
  }
  const GridFunction u = on_box(u_in, d);
  PayneReport rep;
  rep.u = u;
  rep.h = d.box.h;
  rep.threshold = threshold_h * d.box.h;
  const SupportSets sets = support_sets(u, d, tau_rel);
  rep.tau = sets.tau;
  rep.n_plus = sets.plus.size();
  rep.n_minus = sets.minus.size();
  rep.n_nodal = sets.nodal.size();
  if (sets.plus.empty() || sets.minus.empty()) {
    throw PreconditionError("function does not change sign");
  }
  rep.dist_plus = support_distance(sets.plus, d);
  rep.dist_minus = support_distance(sets.minus, d);
  rep.dist_nodal = sets.nodal.empty() ? kInf : support_distance(sets.nodal, d);
  rep.slide_plus = slide_distance(sets.plus, d);
  rep.slide_minus = slide_distance(sets.minus, d);
  rep.lid_plus = lid_touch(sets.plus, d, rep.threshold);
  rep.lid_minus = lid_touch(sets.minus, d, rep.threshold);
  rep.connected = mask_connected(d);
  rep.supports_touch = rep.dist_plus <= rep.threshold && rep.dist_minus <= rep.threshold;
  rep.nodal_touch = rep.dist_nodal <= rep.threshold;
  auto consistent = [&](double dist, const LidTouch& t) {
    return dist > rep.threshold || t.touches_left || t.touches_right || t.touches_cylinder;
  };
  rep.lid_consistent = consistent(rep.dist_plus, rep.lid_plus) && consistent(rep.dist_minus, rep.lid_minus);

  rep.sweep.resize(static_cast<std::size_t>(std::max(sweep_half_steps, 0)));
  std::vector<std::string> errors(rep.sweep.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int m = 1; m <= sweep_half_steps; ++m) {
    SweepEntry& e = rep.sweep[static_cast<std::size_t>(m - 1)];
    try {
      const ReflectionParam a(m, d.box.h);
      const Window hull = d.box.reflected_hull(a);
      const KernelWeights k =
          kernel_cache.empty() ? build_kernel(hull, s, p) : build_kernel_cached(hull, s, p, kernel_cache);
      const EqualityReport er = equality_case(u.embedded(hull), a, k);
      e.half_steps = m;
      e.a = a.value();
      e.deficit_plus = er.deficits.deficit_plus;
      e.deficit_minus = er.deficits.deficit_minus;
      e.seminorm_deficit = er.deficits.seminorm_deficit;
      e.eps_num = er.deficits.eps_num;
      e.equality = to_string(er.cls);
      e.ok = e.deficit_plus >= -e.eps_num && e.deficit_minus >= -e.eps_num && e.seminorm_deficit >= -e.eps_num;
    } catch (const std::exception& ex) {
      errors[static_cast<std::size_t>(m - 1)] = ex.what();
    }
  }
  for (const auto& msg : errors) {
    if (!msg.empty()) {
      throw Error("polarization sweep: " + msg);
    }
  }
  rep.sweep_ok = std::all_of(rep.sweep.begin(), rep.sweep.end(), [](const SweepEntry& e) { return e.ok; });
  rep.ok = rep.supports_touch && rep.lid_consistent && rep.sweep_ok && (!rep.connected || rep.nodal_touch);
  return rep;
}

PayneReport run_payne_experiment(const ExperimentConfig& c) {
  const LatticeDomain d = build_domain(c.domain);
  if (!check_steiner(d)) {
    throw DomainError("domain is not Steiner symmetric");
  }
  const KernelWeights k =
      c.kernel_cache.empty() ? build_kernel(d.box, c.s, c.p) : build_kernel_cached(d.box, c.s, c.p, c.kernel_cache);
  GridFunction u;
  double value = 0.0;
  int iterations = 0;
  if (c.mode == "eigen") {
    EigenOptions o;
    o.tol = c.tol;
    o.multistarts = c.multistarts;
    o.seed = c.seed;
    o.max_iter = c.max_iter;
    EigenReport r = second_eigen_mu2(d, k, o);
    u = std::move(r.u2);
    value = r.mu2;
    iterations = r.iterations;
  } else if (c.mode == "lens") {
    LensOptions o;
    o.tol = c.tol;
    o.multistarts = c.multistarts;
    o.seed = c.seed;
    o.max_iter = c.max_iter;
    LensReport r = lens_minimize(d, build_nonlinearity(c), k, o);
    u = std::move(r.u);
    value = r.level;
    iterations = r.iterations;
  } else {
    throw ParameterError("mode: the Payne experiment runs in eigen or lens mode");
  }
  PayneReport rep =
      payne_diagnostics(u, d, c.s, c.p, c.tau_rel, c.touch_threshold, c.a_sweep_half_steps, c.kernel_cache);
  rep.mode = c.mode;
  rep.value = value;
  rep.iterations = iterations;
  return rep;
}

} // namespace fraclap
