#include "fraclap/optimize.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace fraclap {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

std::vector<double> two_loop(const std::deque<Pair>& mem, const std::vector<double>& g) {
  std::vector<double> q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * dot(mem[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] -= alpha[k] * mem[k].y[i];
    }
  }
  if (!mem.empty()) {
    const Pair& last = mem.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) {
      v *= gamma;
    }
  }
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double beta = mem[k].rho * dot(mem[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] += (alpha[k] - beta) * mem[k].s[i];
    }
  }
  for (double& v : q) {
    v = -v;
  }
  return q;
}

} // namespace

LbfgsResult minimize_lbfgs(const RetractedProblem& prob, std::vector<double> x0, const LbfgsOptions& opt) {
  LbfgsResult res;
  const std::vector<double> start = x0;
  if (!prob.retract(x0, start)) {
    throw PreconditionError("initial point cannot be retracted onto the feasible set");
  }
  std::vector<double> x = std::move(x0);
  std::vector<double> g(x.size());
  double f = prob.evaluate(x, g);
  res.history.push_back(f);

  std::deque<Pair> mem;
  std::vector<double> xt(x.size());
  std::vector<double> gt(x.size());
  int stall = 0;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    if (prob.converged(x, f, g)) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    double ft = f;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      std::vector<double> d = mem.empty() ? g : two_loop(mem, g);
      if (mem.empty()) {
        for (double& v : d) {
          v = -v;
        }
      }
      double slope = dot(g, d);
      if (!(slope < 0.0)) {
        mem.clear();
        d = g;
        for (double& v : d) {
          v = -v;
        }
        slope = dot(g, d);
      }
      if (!(slope < 0.0)) {
        break;
      }
      double alpha = 1.0;
      if (mem.empty()) {
        const double dm = max_abs(d);
        alpha = dm > 0.0 ? opt.first_step * std::max(max_abs(x), 1e-300) / dm : 1.0;
      }
      for (int bt = 0; bt < opt.max_backtracks; ++bt, alpha *= 0.5) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          xt[i] = x[i] + alpha * d[i];
        }
        if (!prob.retract(xt, x)) {
          continue;
        }
        ft = prob.evaluate(xt, gt);
        if (std::isfinite(ft) && ft <= f + opt.armijo * alpha * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (mem.empty()) {
          break;
        }
        mem.clear();
      }
    }
    if (!accepted) {
      res.stalled = true;
      break;
    }
    Pair pr;
    pr.s.resize(x.size());
    pr.y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      pr.s[i] = xt[i] - x[i];
      pr.y[i] = gt[i] - g[i];
    }
    const double sy = dot(pr.s, pr.y);
    if (sy > 1e-12 * std::sqrt(dot(pr.s, pr.s) * dot(pr.y, pr.y))) {
      pr.rho = 1.0 / sy;
      mem.push_back(std::move(pr));
      if (static_cast<int>(mem.size()) > opt.memory) {
        mem.pop_front();
      }
    }
    stall = (f - ft) <= opt.stall_rel * std::abs(f) ? stall + 1 : 0;
    x.swap(xt);
    g.swap(gt);
    f = ft;
    res.history.push_back(f);
    if (stall >= opt.stall_window) {
      res.stalled = true;
      ++it;
      break;
    }
  }
  if (!res.converged && prob.converged(x, f, g)) {
    res.converged = true;
  }
  res.x = std::move(x);
  res.grad = std::move(g);
  res.f = f;
  res.iterations = it;
  return res;
}

} // namespace fraclap
