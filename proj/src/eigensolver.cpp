#include "fraclap/eigensolver.hpp"

#include "fraclap/domain_operator.hpp"
#include "fraclap/energy.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/optimize.hpp"
#include "fraclap/pair_kernels.hpp"
#include "fraclap/powers.hpp"

#include "solver_common.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fraclap {

namespace {

void normalize(const DomainOperator& op, std::vector<double>& x) {
  const double c = std::pow(op.lp_norm_p(x), -1.0 / op.p());
  for (double& v : x) {
    v *= c;
  }
}

// Rescales x^- so that Q_+ = Q_-, then normalizes. False when no balancing factor exists.
bool balance(const DomainOperator& op, std::vector<double>& x) {
  if (!detail::has_both_signs(x)) {
    return false;
  }
  const SignDecomposition sd = SignDecomposition::build(op, x);
  // Q_+(v^+ + t v^-) increases and Q_- decreases in t, so the difference is monotone in ln t.
  auto f = [&](double s) {
    const double t = std::exp(s);
    return sd.quotient_plus(t) - sd.quotient_minus(t);
  };
  double s = 0.0;
  if (!detail::increasing_root(f, 200.0 / op.p(), s)) {
    return false;
  }
  const double t = std::exp(s);
  for (double& v : x) {
    if (v < 0.0) {
      v *= t;
    }
  }
  normalize(op, x);
  return true;
}

struct SecondRun {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  std::vector<double> history;
};

SecondRun run_second(const DomainOperator& op, std::vector<double> x0, const EigenOptions& opt) {
  const double p = op.p();
  const double vol = op.volume();
  const std::size_t n = op.n();

  // Gradient of [x]^p at the last evaluated point, used by the stopping test.
  std::vector<double> last_x;
  std::vector<double> last_gG(n);

  RetractedProblem prob;
  prob.retract = [&](std::vector<double>& x, const std::vector<double>& prev) {
    if (!detail::restore_signs(x, prev)) {
      return false;
    }
    return balance(op, x);
  };
  prob.evaluate = [&](const std::vector<double>& x, std::vector<double>& g) {
    SignSplit ss;
    parallel::sign_split(op.view(), x, ss);
    const Powers pw(p);
    double dp = 0.0, dm = 0.0;
    for (double v : x) {
      if (v > 0.0) {
        dp += pw.pp(v);
      } else if (v < 0.0) {
        dm += pw.pp(-v);
      }
    }
    dp *= vol;
    dm *= vol;
    const double qp = ss.n_plus / dp;
    const double qm = ss.n_minus / dm;
    std::vector<double> gp(n), gm(n);
    double ap = 0.0, am = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xp = x[i] > 0.0 ? x[i] : 0.0;
      const double xm = x[i] < 0.0 ? x[i] : 0.0;
      gp[i] = (ss.grad_plus[i] - qp * vol * p * phi(xp, p)) / dp;
      gm[i] = (ss.grad_minus[i] - qm * vol * p * phi(xm, p)) / dm;
      ap += gp[i] * xm;
      am += gm[i] * xm;
      last_gG[i] = ss.grad_plus[i] + ss.grad_minus[i];
    }
    last_x = x;
    // derivative of the balanced quotient: the balancing factor t(v) moves along v^-
    double theta = 0.5;
    if (ap - am > 0.0) {
      theta = -am / (ap - am);
    }
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = theta * gp[i] + (1.0 - theta) * gm[i];
    }
    return std::max(qp, qm);
  };
  prob.converged = [&](const std::vector<double>& x, double f, const std::vector<double>&) {
    if (x != last_x) {
      std::vector<double> g(n);
      prob.evaluate(x, g);
    }
    return detail::eigen_residual(last_gG, x, f, p, vol) <= opt.tol;
  };

  LbfgsOptions lo;
  lo.max_iter = opt.max_iter;
  const LbfgsResult r = minimize_lbfgs(prob, std::move(x0), lo);
  SecondRun out;
  out.x = r.x;
  out.value = r.f;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.history = r.history;
  std::vector<double> g(n);
  prob.evaluate(r.x, g);
  out.residual = detail::eigen_residual(last_gG, r.x, r.f, p, vol);
  return out;
}

} // namespace

FirstEigenpair first_eigenpair(const LatticeDomain& d, const KernelWeights& k, double tol, int max_iter) {
  if (!(tol > 0.0)) {
    throw ParameterError("tolerance must be positive");
  }
  const DomainOperator op(d, k);
  const double p = op.p();
  const double vol = op.volume();
  const std::size_t n = op.n();
  std::vector<double> last_x;
  std::vector<double> last_gG(n);

  RetractedProblem prob;
  prob.retract = [&](std::vector<double>& x, const std::vector<double>&) {
    for (double& v : x) {
      v = std::abs(v);
    }
    if (detail::max_abs(x) == 0.0) {
      return false;
    }
    normalize(op, x);
    return true;
  };
  prob.evaluate = [&](const std::vector<double>& x, std::vector<double>& g) {
    const double G = parallel::seminorm_gradient(op.view(), x, last_gG);
    last_x = x;
    const double D = op.lp_norm_p(x);
    const double R = G / D;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = (last_gG[i] - R * vol * p * phi(x[i], p)) / D;
    }
    return R;
  };
  prob.converged = [&](const std::vector<double>& x, double f, const std::vector<double>&) {
    if (x != last_x) {
      std::vector<double> g(n);
      prob.evaluate(x, g);
    }
    return detail::eigen_residual(last_gG, x, f, p, vol) <= tol;
  };

  LbfgsOptions lo;
  lo.max_iter = max_iter;
  LbfgsResult r = minimize_lbfgs(prob, detail::positive_profile(op), lo);
  if (!r.converged && !r.stalled) {
    throw ConvergenceError("first eigenpair: iteration limit reached; raise max_iter or loosen tol");
  }
  FirstEigenpair out;
  std::vector<double> g(n);
  out.lambda1 = prob.evaluate(r.x, g);
  out.residual = detail::eigen_residual(last_gG, r.x, out.lambda1, p, vol);
  out.u1 = op.expand(r.x);
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.history = std::move(r.history);
  return out;
}

EigenReport second_eigen_mu2(const LatticeDomain& d, const KernelWeights& k, const EigenOptions& opt) {
  if (!(opt.tol > 0.0)) {
    throw ParameterError("tolerance must be positive");
  }
  if (opt.multistarts < 1) {
    throw ParameterError("multistarts must be at least 1");
  }
  const DomainOperator op(d, k);
  if (op.n() < 2) {
    throw DomainError("a sign-changing function needs at least two nodes");
  }
  const int ns = opt.multistarts;
  std::vector<SecondRun> runs(static_cast<std::size_t>(ns));
  std::vector<MultistartOutcome> outcomes(static_cast<std::size_t>(ns));

  // Inner pair kernels run serially inside this region (nested parallelism is off by default),
  // and their block-ordered sums make every run independent of the thread count.
#pragma omp parallel for schedule(dynamic, 1)
  for (int id = 0; id < ns; ++id) {
    MultistartOutcome& oc = outcomes[static_cast<std::size_t>(id)];
    oc.id = id;
    try {
      std::vector<double> x0 = detail::start_profile(op, id, opt.seed, oc.profile);
      SecondRun r = run_second(op, std::move(x0), opt);
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
  const SecondRun& r = runs[static_cast<std::size_t>(best)];

  EigenReport rep;
  rep.mu2 = r.value;
  rep.u2 = op.expand(r.x);
  rep.iterations = r.iterations;
  rep.multistart_id = best;
  rep.converged = r.converged;
  rep.stationarity = r.residual;
  rep.outcomes = outcomes;
  rep.history = r.history;

  SignSplit ss;
  parallel::sign_split(op.view(), r.x, ss);
  std::vector<double> xp(r.x.size()), xm(r.x.size());
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    xp[i] = std::max(r.x[i], 0.0);
    xm[i] = std::min(r.x[i], 0.0);
  }
  const double dp = op.lp_norm_p(xp);
  const double dm = op.lp_norm_p(xm);
  rep.quotient_plus = ss.n_plus / dp;
  rep.quotient_minus = ss.n_minus / dm;
  rep.residual_plus = rep.mu2 * dp - ss.n_plus;
  rep.residual_minus = rep.mu2 * dm - ss.n_minus;
  return rep;
}

SecondEigenCheck verify_second_eigen(const GridFunction& v, double lambda, const KernelWeights& k, double tol,
                                     const GridFunction* reference) {
  if (!v.has_positive() || !v.has_negative()) {
    throw PreconditionError("function does not change sign");
  }
  const double p = k.p;
  const GridFunction vp = v.pos();
  const GridFunction vm = v.neg();
  const double np = dpairing(v, vp, k) / p;
  const double nm = dpairing(v, vm, k) / p;
  const double dp = lp_norm_p(vp, p);
  const double dm = lp_norm_p(vm, p);
  SecondEigenCheck out;
  out.residual_plus = lambda * dp - np;
  out.residual_minus = lambda * dm - nm;
  out.rel_plus = std::abs(out.residual_plus) / std::max(std::abs(np), 1e-300);
  out.rel_minus = std::abs(out.residual_minus) / std::max(std::abs(nm), 1e-300);
  out.identities_ok = out.rel_plus <= tol && out.rel_minus <= tol;
  if (reference != nullptr) {
    out.has_reference = true;
    const GridFunction& u = *reference;
    const GridFunction up = u.pos();
    const GridFunction um = u.neg();
    const bool norms = dp >= lp_norm_p(up, p) * (1.0 - tol) && dm >= lp_norm_p(um, p) * (1.0 - tol);
    const bool pairs = np <= dpairing(u, up, k) / p * (1.0 + tol) && nm <= dpairing(u, um, k) / p * (1.0 + tol);
    out.comparison_ok = norms && pairs;
    out.equivalent = out.comparison_ok;
  }
  return out;
}

std::vector<CurvePoint> rayleigh_curve(const GridFunction& v, const KernelWeights& k, int samples) {
  if (samples < 1) {
    throw ParameterError("samples must be positive");
  }
  const std::vector<std::uint8_t> all(k.size(), 1);
  const DomainOperator op(k, all);
  const std::vector<double> x = op.restrict_values(v);
  const SignDecomposition sd = SignDecomposition::build(op, x);
  std::vector<CurvePoint> out(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const double th = 2.0 * std::numbers::pi * j / samples;
    CurvePoint& c = out[static_cast<std::size_t>(j)];
    c.alpha = std::cos(th);
    c.beta = std::sin(th);
    const double den = std::pow(std::abs(c.alpha), k.p) * sd.d_pos + std::pow(std::abs(c.beta), k.p) * sd.d_neg;
    c.value = sd.seminorm(c.alpha, c.beta) / den;
  }
  return out;
}

} // namespace fraclap
