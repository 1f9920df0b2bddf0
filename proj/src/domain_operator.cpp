#include "fraclap/domain_operator.hpp"

#include "fraclap/errors.hpp"
#include "fraclap/powers.hpp"

#include <cmath>

namespace fraclap {

DomainOperator::DomainOperator(const LatticeDomain& d, const KernelWeights& k) {
  if (!(d.box == k.window)) {
    throw PreconditionError("kernel window differs from the domain box");
  }
  init(k, d.mask);
}

DomainOperator::DomainOperator(const KernelWeights& k, const std::vector<std::uint8_t>& keep) {
  if (keep.size() != k.size()) {
    throw PreconditionError("node selection does not match the kernel window");
  }
  init(k, keep);
}

void DomainOperator::init(const KernelWeights& k, const std::vector<std::uint8_t>& keep) {
  window_ = k.window;
  p_ = k.p;
  vol_ = cell_volume(k.window);
  const std::size_t nw = k.size();
  for (std::size_t i = 0; i < nw; ++i) {
    if (keep[i]) {
      nodes_.push_back(i);
    }
  }
  const std::size_t n = nodes_.size();
  if (n == 0) {
    throw DomainError("degenerate domain");
  }
  w_.assign(n * n, 0.0);
  c_.assign(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = nodes_[a];
    double outside = 0.0;
    for (std::size_t j = 0; j < nw; ++j) {
      if (!keep[j]) {
        outside += k(i, j);
      }
    }
    c_[a] = k.kappa[i] + outside;
    for (std::size_t b = 0; b < n; ++b) {
      w_[a * n + b] = a == b ? 0.0 : k(i, nodes_[b]);
    }
  }
}

std::vector<double> DomainOperator::restrict_values(const GridFunction& u) const {
  const GridFunction on = u.window == window_ ? u : u.embedded(window_);
  std::vector<double> x(nodes_.size());
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    x[a] = on.values[nodes_[a]];
  }
  return x;
}

GridFunction DomainOperator::expand(std::span<const double> x) const {
  GridFunction u = GridFunction::zeros(window_);
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    u.values[nodes_[a]] = x[a];
  }
  return u;
}

double DomainOperator::lp_norm_p(std::span<const double> x) const {
  double s = 0.0;
  for (double z : x) {
    s += std::pow(std::abs(z), p_);
  }
  return vol_ * s;
}

SignDecomposition SignDecomposition::build(const DomainOperator& op, std::span<const double> v) {
  SignDecomposition sd;
  const double p = op.p();
  sd.p = p;
  const std::size_t n = op.n();
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] > 0.0) {
      sd.pos_nodes.push_back(i);
      sd.d_pos += std::pow(v[i], p);
      sd.a_pos += 2.0 * op.exterior(i) * std::pow(v[i], p);
    } else if (v[i] < 0.0) {
      sd.neg_nodes.push_back(i);
      sd.d_neg += std::pow(-v[i], p);
      sd.a_neg += 2.0 * op.exterior(i) * std::pow(-v[i], p);
    }
  }
  if (sd.pos_nodes.empty() || sd.neg_nodes.empty()) {
    throw PreconditionError("function does not change sign");
  }
  sd.d_pos *= op.volume();
  sd.d_neg *= op.volume();
  sd.cw.reserve(sd.pos_nodes.size() * sd.neg_nodes.size());
  sd.ca.reserve(sd.cw.capacity());
  sd.cb.reserve(sd.cw.capacity());
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = v[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double vj = v[j];
      const double w2 = 2.0 * op.weight(i, j);
      if ((vi > 0.0 && vj < 0.0) || (vi < 0.0 && vj > 0.0)) {
        sd.cw.push_back(w2);
        sd.ca.push_back(vi > 0.0 ? vi : vj);
        sd.cb.push_back(vi > 0.0 ? -vj : -vi);
        continue;
      }
      const double dp = std::max(vi, 0.0) - std::max(vj, 0.0);
      const double dm = std::min(vi, 0.0) - std::min(vj, 0.0);
      if (dp != 0.0) {
        sd.a_pos += w2 * std::pow(std::abs(dp), p);
      }
      if (dm != 0.0) {
        sd.a_neg += w2 * std::pow(std::abs(dm), p);
      }
    }
  }
  return sd;
}

double SignDecomposition::pairing_plus(double tp, double tm) const {
  const Powers pw(p);
  double s = 0.0;
  for (std::size_t k = 0; k < cw.size(); ++k) {
    s += cw[k] * pw.pm1(tp * ca[k] + tm * cb[k]) * ca[k];
  }
  return std::pow(tp, p - 1.0) * a_pos + s;
}

double SignDecomposition::pairing_minus(double tp, double tm) const {
  const Powers pw(p);
  double s = 0.0;
  for (std::size_t k = 0; k < cw.size(); ++k) {
    s += cw[k] * pw.pm1(tp * ca[k] + tm * cb[k]) * cb[k];
  }
  return std::pow(tm, p - 1.0) * a_neg + s;
}

void SignDecomposition::pairing_jacobian(double tp, double tm, double jac[2][2]) const {
  const Powers pw(p);
  double saa = 0.0;
  double sab = 0.0;
  double sbb = 0.0;
  for (std::size_t k = 0; k < cw.size(); ++k) {
    const double t = cw[k] * (p - 1.0) * pw.pm2(tp * ca[k] + tm * cb[k]);
    saa += t * ca[k] * ca[k];
    sab += t * ca[k] * cb[k];
    sbb += t * cb[k] * cb[k];
  }
  jac[0][0] = (p - 1.0) * std::pow(tp, p - 2.0) * a_pos + saa;
  jac[0][1] = sab;
  jac[1][0] = sab;
  jac[1][1] = (p - 1.0) * std::pow(tm, p - 2.0) * a_neg + sbb;
}

double SignDecomposition::seminorm(double alpha, double beta) const {
  const Powers pw(p);
  double s = 0.0;
  for (std::size_t k = 0; k < cw.size(); ++k) {
    s += cw[k] * pw.pp(std::abs(alpha * ca[k] + beta * cb[k]));
  }
  return std::pow(std::abs(alpha), p) * a_pos + std::pow(std::abs(beta), p) * a_neg + s;
}

double SignDecomposition::quotient_plus(double t) const { return pairing_plus(1.0, t) / d_pos; }

double SignDecomposition::quotient_minus(double t) const {
  return pairing_minus(1.0, t) * std::pow(t, 1.0 - p) / d_neg;
}

} // namespace fraclap
