#include "fraclap/nehari.hpp"

#include "fraclap/domain_operator.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/optimize.hpp"
#include "fraclap/pair_kernels.hpp"

#include "solver_common.hpp"

#include <algorithm>
#include <cmath>

namespace fraclap {

namespace {

constexpr double kScaleTol = 1e-13;

void require_superhomogeneous(const Nonlinearity& nl) {
  if (!nl.superhomogeneous()) {
    throw ParameterError("superhomogeneity violated");
  }
}

// h^N sum_{i in S} f(t x_i) x_i and its t-derivative
struct FSum {
  const Nonlinearity& nl;
  const std::vector<double>& x;
  const std::vector<std::size_t>& idx;
  double vol;

  double value(double t) const {
    double s = 0.0;
    for (std::size_t i : idx) {
      s += nl.f(t * x[i]) * x[i];
    }
    return vol * s;
  }
  double deriv(double t) const {
    double s = 0.0;
    for (std::size_t i : idx) {
      s += nl.fprime(t * x[i]) * x[i] * x[i];
    }
    return vol * s;
  }
};

NehariScale scale_with(const SignDecomposition& sd, const std::vector<double>& x, const Nonlinearity& nl, double vol) {
  const double p = sd.p;
  const FSum sp{nl, x, sd.pos_nodes, vol};
  const FSum sm{nl, x, sd.neg_nodes, vol};
  auto resid = [&](double tp, double tm, double r[2]) {
    const double pp = sd.pairing_plus(tp, tm);
    const double pm = sd.pairing_minus(tp, tm);
    const double fp = sp.value(tp);
    const double fm = sm.value(tm);
    r[0] = (pp - fp) / (std::abs(pp) + std::abs(fp));
    r[1] = (pm - fm) / (std::abs(pm) + std::abs(fm));
    return std::max(std::abs(r[0]), std::abs(r[1]));
  };

  NehariScale out;
  double lp = 0.0, lm = 0.0; // log t
  double r[2];
  double err = resid(1.0, 1.0, r);
  int it = 0;
  bool ok = std::isfinite(err) && err <= kScaleTol;
  for (; it < 100 && !ok; ++it) {
    const double tp = std::exp(lp), tm = std::exp(lm);
    double jac[2][2];
    sd.pairing_jacobian(tp, tm, jac);
    const double pp = sd.pairing_plus(tp, tm);
    const double pm = sd.pairing_minus(tp, tm);
    const double np = std::abs(pp) + std::abs(sp.value(tp));
    const double nm = std::abs(pm) + std::abs(sm.value(tm));
    // Jacobian of the scaled residuals in log variables (normalizers frozen)
    const double a = tp * (jac[0][0] - sp.deriv(tp)) / np;
    const double b = tm * jac[0][1] / np;
    const double c = tp * jac[1][0] / nm;
    const double d = tm * (jac[1][1] - sm.deriv(tm)) / nm;
    const double det = a * d - b * c;
    if (!std::isfinite(det) || det == 0.0) {
      break;
    }
    const double dp = -(d * r[0] - b * r[1]) / det;
    const double dm = -(-c * r[0] + a * r[1]) / det;
    double step = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt, step *= 0.5) {
      double rt[2];
      const double e = resid(std::exp(lp + step * dp), std::exp(lm + step * dm), rt);
      if (std::isfinite(e) && e < err) {
        lp += step * dp;
        lm += step * dm;
        err = e;
        r[0] = rt[0];
        r[1] = rt[1];
        moved = true;
        break;
      }
    }
    if (!moved) {
      break;
    }
    ok = err <= kScaleTol;
  }
  out.newton = true;
  if (!ok) {
    // alternating 1D solves; each equation divided by t^{p-1} is monotone in its own variable
    out.newton = false;
    const double smax = 600.0 / std::max(p, 1.0);
    for (int sweep = 0; sweep < 500 && !ok; ++sweep, ++it) {
      auto gp = [&](double s) {
        const double t = std::exp(s);
        return (sp.value(t) - sd.pairing_plus(t, std::exp(lm))) / std::pow(t, p - 1.0);
      };
      if (!detail::increasing_root(gp, smax, lp)) {
        break;
      }
      auto gm = [&](double s) {
        const double t = std::exp(s);
        return (sm.value(t) - sd.pairing_minus(std::exp(lp), t)) / std::pow(t, p - 1.0);
      };
      if (!detail::increasing_root(gm, smax, lm)) {
        break;
      }
      err = resid(std::exp(lp), std::exp(lm), r);
      ok = std::isfinite(err) && err <= 1e-12;
    }
  }
  if (!ok) {
    throw ConvergenceError("Nehari rescaling did not converge");
  }
  out.t_plus = std::exp(lp);
  out.t_minus = std::exp(lm);
  out.iterations = it;
  out.residual_plus = out.t_plus * (sd.pairing_plus(out.t_plus, out.t_minus) - sp.value(out.t_plus));
  out.residual_minus = out.t_minus * (sd.pairing_minus(out.t_plus, out.t_minus) - sm.value(out.t_minus));
  return out;
}

// E and dE at x on the unknowns of op
double energy_eval(const DomainOperator& op, const Nonlinearity& nl, const std::vector<double>& x,
                   std::vector<double>& g) {
  const double G = parallel::seminorm_gradient(op.view(), x, g);
  const double p = op.p();
  const double vol = op.volume();
  double Fs = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Fs += nl.F(x[i]);
    g[i] = g[i] / p - vol * nl.f(x[i]);
  }
  return G / p - vol * Fs;
}

double energy_stationarity(const DomainOperator& op, const Nonlinearity& nl, const std::vector<double>& x,
                           const std::vector<double>& g) {
  double fm = 0.0;
  for (double v : x) {
    fm = std::max(fm, std::abs(nl.f(v)));
  }
  const double scale = op.volume() * fm;
  return scale > 0.0 ? detail::max_abs(g) / scale : detail::max_abs(g);
}

struct LensRun {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  std::vector<double> history;
};

LensRun run_lens(const DomainOperator& op, const Nonlinearity& nl, std::vector<double> x0, const LensOptions& opt) {
  RetractedProblem prob;
  prob.retract = [&](std::vector<double>& x, const std::vector<double>& prev) {
    if (!detail::restore_signs(x, prev)) {
      return false;
    }
    try {
      const SignDecomposition sd = SignDecomposition::build(op, x);
      const NehariScale ns = scale_with(sd, x, nl, op.volume());
      for (double& v : x) {
        v *= v > 0.0 ? ns.t_plus : ns.t_minus;
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  };
  // On the nodal Nehari set the derivatives of E along v^+ and v^- vanish, so the gradient of
  // v -> E(t_+(v) v^+ + t_-(v) v^-) there is just dE.
  prob.evaluate = [&](const std::vector<double>& x, std::vector<double>& g) { return energy_eval(op, nl, x, g); };
  prob.converged = [&](const std::vector<double>& x, double, const std::vector<double>& g) {
    return energy_stationarity(op, nl, x, g) <= opt.tol;
  };
  LbfgsOptions lo;
  lo.max_iter = opt.max_iter;
  const LbfgsResult r = minimize_lbfgs(prob, std::move(x0), lo);
  LensRun out;
  out.x = r.x;
  out.value = r.f;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.history = r.history;
  out.residual = energy_stationarity(op, nl, r.x, r.grad);
  return out;
}

} // namespace

NehariScale nehari_scale(const GridFunction& v, const Nonlinearity& nl, const KernelWeights& k) {
  require_superhomogeneous(nl);
  if (nl.p() != k.p) {
    throw ParameterError("nonlinearity and kernel use different p");
  }
  if (!v.has_positive() || !v.has_negative()) {
    throw PreconditionError("function does not change sign");
  }
  const std::vector<std::uint8_t> all(k.size(), 1);
  const DomainOperator op(k, all);
  const std::vector<double> x = op.restrict_values(v);
  const SignDecomposition sd = SignDecomposition::build(op, x);
  return scale_with(sd, x, nl, op.volume());
}

LensReport lens_minimize(const LatticeDomain& d, const Nonlinearity& nl, const KernelWeights& k,
                         const LensOptions& opt) {
  require_superhomogeneous(nl);
  if (nl.p() != k.p) {
    throw ParameterError("nonlinearity and kernel use different p");
  }
  if (!(opt.tol > 0.0) || opt.multistarts < 1) {
    throw ParameterError("tolerance must be positive and multistarts at least 1");
  }
  const DomainOperator op(d, k);
  if (op.n() < 2) {
    throw DomainError("a sign-changing function needs at least two nodes");
  }
  const int ns = opt.multistarts;
  std::vector<LensRun> runs(static_cast<std::size_t>(ns));
  std::vector<MultistartOutcome> outcomes(static_cast<std::size_t>(ns));
#pragma omp parallel for schedule(dynamic, 1)
  for (int id = 0; id < ns; ++id) {
    MultistartOutcome& oc = outcomes[static_cast<std::size_t>(id)];
    oc.id = id;
    try {
      LensRun r = run_lens(op, nl, detail::start_profile(op, id, opt.seed, oc.profile), opt);
      oc.value = r.value;
      oc.iterations = r.iterations;
      oc.converged = r.converged;
      oc.residual = r.residual;
      oc.ok = detail::has_both_signs(r.x) && std::isfinite(r.value);
      runs[static_cast<std::size_t>(id)] = std::move(r);
    } catch (const std::exception& e) {
      oc.ok = false;
      oc.error = e.what();
    }
  }
  const int best = detail::pick_best(outcomes);
  if (best < 0) {
    throw ConvergenceError("no sign-changing minimizer found");
  }
  const LensRun& r = runs[static_cast<std::size_t>(best)];

  LensReport rep;
  rep.level = r.value;
  rep.u = op.expand(r.x);
  rep.stationarity = r.residual;
  rep.iterations = r.iterations;
  rep.multistart_id = best;
  rep.converged = r.converged;
  rep.outcomes = outcomes;
  rep.history = r.history;

  const SignDecomposition sd = SignDecomposition::build(op, r.x);
  rep.reprojection = scale_with(sd, r.x, nl, op.volume());
  SignSplit ss;
  parallel::sign_split(op.view(), r.x, ss);
  const double vol = op.volume();
  double fp = 0.0, fm = 0.0, gs = 0.0;
  for (double v : r.x) {
    (v > 0.0 ? fp : fm) += nl.f(v) * v;
    gs += nl.G(v);
  }
  rep.residual_plus = ss.n_plus - vol * fp;
  rep.residual_minus = ss.n_minus - vol * fm;
  rep.g_identity_gap = std::abs(rep.level - vol * gs / op.p());
  rep.scale = vol * (fp + fm);
  return rep;
}

GroundState nehari_ground_state(const LatticeDomain& d, const Nonlinearity& nl, const KernelWeights& k, double tol,
                                int max_iter) {
  require_superhomogeneous(nl);
  if (nl.p() != k.p) {
    throw ParameterError("nonlinearity and kernel use different p");
  }
  const DomainOperator op(d, k);
  const double p = op.p();
  const double vol = op.volume();
  RetractedProblem prob;
  prob.retract = [&](std::vector<double>& x, const std::vector<double>&) {
    for (double& v : x) {
      v = std::abs(v);
    }
    if (detail::max_abs(x) == 0.0) {
      return false;
    }
    const double G = parallel::seminorm(op.view(), x);
    // (h^N sum f(t x) x) / t^{p-1} - [x]^p is increasing in t
    auto g = [&](double s) {
      const double t = std::exp(s);
      double acc = 0.0;
      for (double v : x) {
        acc += nl.f(t * v) * v;
      }
      return vol * acc / std::pow(t, p - 1.0) - G;
    };
    double s = 0.0;
    if (!detail::increasing_root(g, 600.0 / std::max(p, 1.0), s)) {
      return false;
    }
    const double t = std::exp(s);
    for (double& v : x) {
      v *= t;
    }
    return true;
  };
  prob.evaluate = [&](const std::vector<double>& x, std::vector<double>& g) { return energy_eval(op, nl, x, g); };
  prob.converged = [&](const std::vector<double>& x, double, const std::vector<double>& g) {
    return energy_stationarity(op, nl, x, g) <= tol;
  };
  LbfgsOptions lo;
  lo.max_iter = max_iter;
  const LbfgsResult r = minimize_lbfgs(prob, detail::positive_profile(op), lo);
  GroundState out;
  out.level = r.f;
  out.u = op.expand(r.x);
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.stationarity = energy_stationarity(op, nl, r.x, r.grad);
  const double G = parallel::seminorm(op.view(), r.x);
  double fs = 0.0;
  for (double v : r.x) {
    fs += nl.f(v) * v;
  }
  out.residual = G - vol * fs;
  return out;
}

LensCheck lens_verify(const GridFunction& v, const GridFunction& u, const Nonlinearity& nl, const KernelWeights& k,
                      double tol) {
  if (!(tol > 0.0)) {
    throw ParameterError("tolerance must be positive");
  }
  const double p = k.p;
  const double vol = cell_volume(k.window);
  auto sums = [&](const GridFunction& w, double& F, double& fp, double& fm) {
    F = fp = fm = 0.0;
    for (double z : w.values) {
      F += nl.F(z);
      if (z > 0.0) {
        fp += nl.f(z) * z;
      } else if (z < 0.0) {
        fm += nl.f(z) * z;
      }
    }
    F *= vol;
    fp *= vol;
    fm *= vol;
  };
  LensCheck c;
  sums(v, c.F_v, c.f_plus_v, c.f_minus_v);
  sums(u, c.F_u, c.f_plus_u, c.f_minus_u);
  c.pair_plus_v = dpairing(v, v.pos(), k) / p;
  c.pair_minus_v = dpairing(v, v.neg(), k) / p;
  c.pair_plus_u = dpairing(u, u.pos(), k) / p;
  c.pair_minus_u = dpairing(u, u.neg(), k) / p;
  auto close = [&](double a, double b) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); };
  c.F_ok = c.F_v >= c.F_u - tol * std::abs(c.F_u);
  c.f_ok = close(c.f_plus_v, c.f_plus_u) && close(c.f_minus_v, c.f_minus_u);
  c.pairing_ok = c.pair_plus_v <= c.pair_plus_u + tol * std::abs(c.pair_plus_u) &&
                 c.pair_minus_v <= c.pair_minus_u + tol * std::abs(c.pair_minus_u);
  c.ok = c.F_ok && c.f_ok && c.pairing_ok;
  return c;
}

} // namespace fraclap
