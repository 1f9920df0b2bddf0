#include "fraclap/pair_kernels.hpp"

#include "fraclap/powers.hpp"

#include <algorithm>
#include <cmath>

namespace fraclap {

double phi(double t, double p) {
  if (t == 0.0) {
    return 0.0;
  }
  return std::pow(std::abs(t), p - 2.0) * t;
}

namespace serial {

double seminorm(const PairView& k, std::span<const double> u) {
  const std::size_t n = k.n;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        s += k.w[i * n + j] * std::pow(std::abs(u[i] - u[j]), k.p);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    s += 2.0 * k.c[i] * std::pow(std::abs(u[i]), k.p);
  }
  return s;
}

double pairing(const PairView& k, std::span<const double> u, std::span<const double> xi) {
  const std::size_t n = k.n;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        s += k.w[i * n + j] * phi(u[i] - u[j], k.p) * (xi[i] - xi[j]);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    s += 2.0 * k.c[i] * phi(u[i], k.p) * xi[i];
  }
  return k.p * s;
}

double seminorm_gradient(const PairView& k, std::span<const double> u, std::span<double> grad) {
  const std::size_t n = k.n;
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        // d/du_i and d/du_j of w |u_i - u_j|^p
        const double t = k.p * k.w[i * n + j] * phi(u[i] - u[j], k.p);
        grad[i] += t;
        grad[j] -= t;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] += 2.0 * k.p * k.c[i] * phi(u[i], k.p);
  }
  return seminorm(k, u);
}

void sign_split(const PairView& k, std::span<const double> u, SignSplit& out) {
  const std::size_t n = k.n;
  const double p = k.p;
  out.n_plus = 0.0;
  out.n_minus = 0.0;
  out.grad_plus.assign(n, 0.0);
  out.grad_minus.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        continue;
      }
      const double d = u[i] - u[j];
      if (d == 0.0) {
        continue;
      }
      const double w = k.w[i * n + j];
      const double dphi = (p - 1.0) * std::pow(std::abs(d), p - 2.0);
      const double ph = phi(d, p);
      const double dp = std::max(u[i], 0.0) - std::max(u[j], 0.0);
      const double dm = std::min(u[i], 0.0) - std::min(u[j], 0.0);
      out.n_plus += w * ph * dp;
      out.n_minus += w * ph * dm;
      out.grad_plus[i] += w * (dphi * dp + (u[i] > 0.0 ? ph : 0.0));
      out.grad_plus[j] -= w * (dphi * dp + (u[j] > 0.0 ? ph : 0.0));
      out.grad_minus[i] += w * (dphi * dm + (u[i] < 0.0 ? ph : 0.0));
      out.grad_minus[j] -= w * (dphi * dm + (u[j] < 0.0 ? ph : 0.0));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double up = std::max(u[i], 0.0);
    const double um = std::min(u[i], 0.0);
    out.n_plus += 2.0 * k.c[i] * std::pow(up, p);
    out.n_minus += 2.0 * k.c[i] * std::pow(std::abs(um), p);
    out.grad_plus[i] += 2.0 * p * k.c[i] * phi(up, p);
    out.grad_minus[i] += 2.0 * p * k.c[i] * phi(um, p);
  }
}

} // namespace serial

namespace parallel {

namespace {

constexpr std::size_t kMaxBlocks = 64;

constexpr double kTiny = 1e-290;

// Row blocks [start[b], start[b+1]) of the strict upper triangle, balanced by pair count.
std::vector<std::size_t> row_blocks(std::size_t n) {
  std::vector<std::size_t> start{0};
  if (n < 2) {
    start.push_back(n);
    return start;
  }
  const std::size_t blocks = std::min(kMaxBlocks, n - 1);
  const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  double acc = 0.0;
  std::size_t b = 1;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(n - 1 - i);
    if (b < blocks && acc >= total * static_cast<double>(b) / static_cast<double>(blocks)) {
      start.push_back(i + 1);
      ++b;
    }
  }
  start.push_back(n);
  start.erase(std::unique(start.begin(), start.end()), start.end());
  return start;
}

} // namespace

double seminorm(const PairView& k, std::span<const double> u) {
  const std::size_t n = k.n;
  const auto start = row_blocks(n);
  const long nb = static_cast<long>(start.size()) - 1;
  std::vector<double> part(static_cast<std::size_t>(nb), 0.0);
  const Powers pw(k.p);
#pragma omp parallel for schedule(dynamic, 1)
  for (long b = 0; b < nb; ++b) {
    double s = 0.0;
    for (std::size_t i = start[b]; i < start[b + 1]; ++i) {
      const double ui = u[i];
      const double* wr = &k.w[i * n];
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = std::abs(ui - u[j]);
        if (a > kTiny) {
          s += wr[j] * pw.pm2(a) * a * a;
        }
      }
      const double a = std::abs(ui);
      if (a > kTiny) {
        s += k.c[i] * pw.pm2(a) * a * a;
      }
    }
    part[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : part) {
    total += s;
  }
  return 2.0 * total;
}

double pairing(const PairView& k, std::span<const double> u, std::span<const double> xi) {
  const std::size_t n = k.n;
  const auto start = row_blocks(n);
  const long nb = static_cast<long>(start.size()) - 1;
  std::vector<double> part(static_cast<std::size_t>(nb), 0.0);
  const Powers pw(k.p);
#pragma omp parallel for schedule(dynamic, 1)
  for (long b = 0; b < nb; ++b) {
    double s = 0.0;
    for (std::size_t i = start[b]; i < start[b + 1]; ++i) {
      const double ui = u[i];
      const double xii = xi[i];
      const double* wr = &k.w[i * n];
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = ui - u[j];
        const double a = std::abs(d);
        if (a > kTiny) {
          s += wr[j] * pw.pm2(a) * d * (xii - xi[j]);
        }
      }
      const double a = std::abs(ui);
      if (a > kTiny) {
        s += k.c[i] * pw.pm2(a) * ui * xii;
      }
    }
    part[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : part) {
    total += s;
  }
  return 2.0 * k.p * total;
}

double seminorm_gradient(const PairView& k, std::span<const double> u, std::span<double> grad) {
  const std::size_t n = k.n;
  const auto start = row_blocks(n);
  const std::size_t nb = start.size() - 1;
  std::vector<double> part(nb, 0.0);
  std::vector<double> buf(nb * n, 0.0);
  const Powers pw(k.p);
#pragma omp parallel for schedule(dynamic, 1)
  for (long bl = 0; bl < static_cast<long>(nb); ++bl) {
    const std::size_t b = static_cast<std::size_t>(bl);
    double* g = &buf[b * n];
    double s = 0.0;
    for (std::size_t i = start[b]; i < start[b + 1]; ++i) {
      const double ui = u[i];
      const double* wr = &k.w[i * n];
      double gi = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = ui - u[j];
        const double a = std::abs(d);
        if (a > kTiny) {
          const double t = wr[j] * pw.pm2(a) * d;
          s += t * d;
          gi += t;
          g[j] -= t;
        }
      }
      const double a = std::abs(ui);
      if (a > kTiny) {
        const double t = k.c[i] * pw.pm2(a) * ui;
        s += t * ui;
        gi += t;
      }
      g[i] += gi;
    }
    part[b] = s;
  }
  const double f = 2.0 * k.p;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      acc += buf[b * n + j];
    }
    grad[j] = f * acc;
  }
  double total = 0.0;
  for (double s : part) {
    total += s;
  }
  return 2.0 * total;
}

void sign_split(const PairView& k, std::span<const double> u, SignSplit& out) {
  const std::size_t n = k.n;
  const double p = k.p;
  const auto start = row_blocks(n);
  const std::size_t nb = start.size() - 1;
  std::vector<double> part(2 * nb, 0.0);
  std::vector<double> buf(2 * nb * n, 0.0);
  const Powers pw(p);
#pragma omp parallel for schedule(dynamic, 1)
  for (long bl = 0; bl < static_cast<long>(nb); ++bl) {
    const std::size_t b = static_cast<std::size_t>(bl);
    double* gp = &buf[2 * b * n];
    double* gm = gp + n;
    double sp = 0.0;
    double sm = 0.0;
    for (std::size_t i = start[b]; i < start[b + 1]; ++i) {
      const double ui = u[i];
      const double upi = ui > 0.0 ? ui : 0.0;
      const double umi = ui < 0.0 ? ui : 0.0;
      const double* wr = &k.w[i * n];
      for (std::size_t j = i + 1; j < n; ++j) {
        const double uj = u[j];
        const double d = ui - uj;
        const double a = std::abs(d);
        if (!(a > kTiny)) {
          continue;
        }
        const double wp = wr[j] * pw.pm2(a);
        const double wph = wp * d;
        const double wdphi = (p - 1.0) * wp;
        const double dp = upi - (uj > 0.0 ? uj : 0.0);
        const double dm = umi - (uj < 0.0 ? uj : 0.0);
        sp += wph * dp;
        sm += wph * dm;
        gp[i] += wdphi * dp + (ui > 0.0 ? wph : 0.0);
        gp[j] -= wdphi * dp + (uj > 0.0 ? wph : 0.0);
        gm[i] += wdphi * dm + (ui < 0.0 ? wph : 0.0);
        gm[j] -= wdphi * dm + (uj < 0.0 ? wph : 0.0);
      }
      const double a = std::abs(ui);
      if (a > kTiny) {
        // c |u^+|^p and its derivative p c phi(u^+); likewise for u^-
        const double t = k.c[i] * pw.pm2(a) * ui;
        if (ui > 0.0) {
          sp += t * ui;
          gp[i] += p * t;
        } else {
          sm += t * ui;
          gm[i] += p * t;
        }
      }
    }
    part[2 * b] = sp;
    part[2 * b + 1] = sm;
  }
  out.grad_plus.assign(n, 0.0);
  out.grad_minus.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double ap = 0.0;
    double am = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      ap += buf[2 * b * n + j];
      am += buf[(2 * b + 1) * n + j];
    }
    out.grad_plus[j] = 2.0 * ap;
    out.grad_minus[j] = 2.0 * am;
  }
  double np = 0.0;
  double nm = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    np += part[2 * b];
    nm += part[2 * b + 1];
  }
  out.n_plus = 2.0 * np;
  out.n_minus = 2.0 * nm;
}

} // namespace parallel

} // namespace fraclap
