#include "solver_common.hpp"

#include "fraclap/pair_kernels.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace fraclap::detail {

std::vector<double> start_profile(const DomainOperator& op, int id, std::uint64_t seed, std::string& name) {
  const Window& w = op.window();
  const auto& nodes = op.nodes();
  const std::size_t n = nodes.size();
  double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (std::size_t i : nodes) {
    lo1 = std::min(lo1, w.x1(i));
    hi1 = std::max(hi1, w.x1(i));
    lo2 = std::min(lo2, w.x2(i));
    hi2 = std::max(hi2, w.x2(i));
  }
  const double c1 = 0.5 * (lo1 + hi1);
  const double c2 = 0.5 * (lo2 + hi2);
  const double len = std::max(0.5 * (hi1 - lo1), w.h);
  std::vector<double> x(n);
  if (id == 0) {
    name = "odd";
    for (std::size_t a = 0; a < n; ++a) {
      x[a] = w.x1(nodes[a]) - c1;
    }
  } else if (id == 1) {
    name = "shifted_bump";
    const double r2 = 0.25 * len * len;
    for (std::size_t a = 0; a < n; ++a) {
      const double d1 = w.x1(nodes[a]) - c1 - 0.3 * len;
      const double d2 = w.x2(nodes[a]) - c2;
      x[a] = std::exp(-(d1 * d1 + d2 * d2) / r2) - 0.5;
    }
  } else {
    name = "noise";
    std::mt19937_64 rng(seed + 1000003ULL * static_cast<std::uint64_t>(id));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : x) {
      v = dist(rng);
    }
    std::vector<double> sorted = x;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    const double med = sorted[n / 2];
    for (double& v : x) {
      v -= med;
    }
  }
  return x;
}

std::vector<double> positive_profile(const DomainOperator& op) {
  return std::vector<double>(op.n(), 1.0);
}

bool has_both_signs(std::span<const double> x) {
  bool pos = false, neg = false;
  for (double v : x) {
    pos = pos || v > 0.0;
    neg = neg || v < 0.0;
  }
  return pos && neg;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

bool restore_signs(std::vector<double>& x, std::span<const double> previous) {
  if (has_both_signs(x)) {
    return true;
  }
  if (!has_both_signs(previous)) {
    return false;
  }
  double m = max_abs(x);
  if (m == 0.0) {
    m = max_abs(previous);
  }
  const double floor = 1e-8 * m;
  bool pos = false, neg = false;
  for (double v : x) {
    pos = pos || v > 0.0;
    neg = neg || v < 0.0;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!pos && previous[i] > 0.0 && x[i] <= 0.0) {
      x[i] = floor;
    }
    if (!neg && previous[i] < 0.0 && x[i] >= 0.0) {
      x[i] = -floor;
    }
  }
  return has_both_signs(x);
}

double eigen_residual(std::span<const double> g, std::span<const double> x, double lambda, double p, double vol) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r = std::max(r, std::abs(g[i] / p - lambda * vol * phi(x[i], p)));
  }
  const double scale = lambda * vol * std::pow(max_abs(x), p - 1.0);
  return scale > 0.0 ? r / scale : r;
}

bool increasing_root(const std::function<double(double)>& f, double smax, double& s) {
  double lo = -0.5, hi = 0.5;
  double flo = f(lo), fhi = f(hi);
  while (flo > 0.0 && lo > -smax) {
    hi = lo;
    fhi = flo;
    lo = std::max(2.0 * lo, -smax);
    flo = f(lo);
  }
  while (fhi < 0.0 && hi < smax) {
    lo = hi;
    flo = fhi;
    hi = std::min(2.0 * hi, smax);
    fhi = f(hi);
  }
  if (!std::isfinite(flo) || !std::isfinite(fhi) || !(flo <= 0.0 && fhi >= 0.0)) {
    return false;
  }
  if (flo == 0.0) {
    s = lo;
    return true;
  }
  if (fhi == 0.0) {
    s = hi;
    return true;
  }
  std::uintmax_t iters = 200;
  const auto br =
      boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
  s = 0.5 * (br.first + br.second);
  return true;
}

int pick_best(const std::vector<MultistartOutcome>& outcomes) {
  int best = -1;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].ok && (best < 0 || outcomes[i].value < outcomes[static_cast<std::size_t>(best)].value)) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0 || outcomes[static_cast<std::size_t>(best)].converged) {
    return best;
  }
  const double v = outcomes[static_cast<std::size_t>(best)].value;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& oc = outcomes[i];
    if (oc.ok && oc.converged && oc.value - v <= 1e-9 * std::abs(v)) {
      return static_cast<int>(i);
    }
  }
  return best;
}

} // namespace fraclap::detail
