#include "fraclap/kernel.hpp"

#include "fraclap/errors.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <string>

namespace fraclap {

namespace {

// Angular sector of the complement seen from a point at distance d from one side,
// between the foot of the perpendicular and a corner at lateral offset l:
//   int_0^atan(l/d) (d / cos phi)^{-nu} / nu dphi.
double sector(double d, double l, double nu) {
  const double x = l * l / (l * l + d * d);
  return std::pow(d, -nu) / nu * 0.5 * boost::math::beta(0.5, 0.5 * (nu + 1.0), x);
}

void write_pod(std::ofstream& out, const auto& v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }
template <class T>
bool read_pod(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return static_cast<bool>(in);
}

constexpr std::uint64_t kCacheMagic = 0x31574b4c4652ULL;

} // namespace

void check_order_and_exponent(double s, double p) {
  if (!(s > 0.0 && s < 1.0)) {
    throw ParameterError("order must be in (0,1)");
  }
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ParameterError("exponent p must be in (1,inf)");
  }
}

double exterior_tail_integral(const Window& win, std::size_t i, double nu) {
  const double hh = 0.5 * win.h;
  const int k1 = win.k1(i);
  const double dl = (k1 - win.k1_lo + 1) * hh;
  const double dr = (win.k1_hi() + 1 - k1) * hh;
  if (win.dim == 1) {
    // summed in a fixed order of the two values so mirrored nodes agree bit for bit
    const double x = std::pow(dl, -nu);
    const double y = std::pow(dr, -nu);
    return (std::min(x, y) + std::max(x, y)) / nu;
  }
  const int k2 = win.k2(i);
  const double db = (k2 - win.k2_lo + 1) * hh;
  const double dt = (win.k2_hi() + 1 - k2) * hh;
  std::array<double, 8> t = {sector(dl, db, nu), sector(dl, dt, nu), sector(dr, db, nu), sector(dr, dt, nu),
                             sector(db, dl, nu), sector(db, dr, nu), sector(dt, dl, nu), sector(dt, dr, nu)};
  std::sort(t.begin(), t.end());
  double sum = 0.0;
  for (double x : t) {
    sum += x;
  }
  return sum;
}

KernelWeights KernelWeights::custom(const Window& window, double s, double p, std::vector<double> w,
                                    std::vector<double> kappa) {
  const std::size_t n = window.size();
  if (w.size() != n * n || kappa.size() != n) {
    throw PreconditionError("custom kernel has the wrong size");
  }
  KernelWeights k;
  k.s = s;
  k.p = p;
  k.window = window;
  k.w = std::move(w);
  k.kappa = std::move(kappa);
  for (std::size_t i = 0; i < n; ++i) {
    k.w[i * n + i] = 0.0;
  }
  return k;
}

KernelWeights build_kernel(const Window& window, double s, double p) {
  check_order_and_exponent(s, p);
  const int dim = window.dim;
  const double h = window.h;
  const double nu = p * s;
  const double expo = -0.5 * (dim + nu);
  const double scale = std::pow(h, 2.0 * dim);

  // w only depends on the column/row offsets
  const int n1 = window.n1;
  const int n2 = window.n2;
  std::vector<double> table(static_cast<std::size_t>(n1) * n2, 0.0);
  for (int d2 = 0; d2 < n2; ++d2) {
    for (int d1 = 0; d1 < n1; ++d1) {
      if (d1 == 0 && d2 == 0) {
        continue;
      }
      const double r2 = h * h * (static_cast<double>(d1) * d1 + static_cast<double>(d2) * d2);
      table[static_cast<std::size_t>(d2) * n1 + d1] = scale * std::pow(r2, expo);
    }
  }

  KernelWeights k;
  k.s = s;
  k.p = p;
  k.window = window;
  const std::size_t n = window.size();
  k.w.assign(n * n, 0.0);
  k.kappa.assign(n, 0.0);
  const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long il = 0; il < nn; ++il) {
    const std::size_t i = static_cast<std::size_t>(il);
    const int i1 = window.col(i);
    const int i2 = window.row(i);
    double* row = &k.w[i * n];
    for (std::size_t j = 0; j < n; ++j) {
      const int d1 = std::abs(window.col(j) - i1);
      const int d2 = std::abs(window.row(j) - i2);
      row[j] = table[static_cast<std::size_t>(d2) * n1 + d1];
    }
    k.kappa[i] = std::pow(h, dim) * exterior_tail_integral(window, i, nu);
  }
  const double kmax = *std::max_element(k.kappa.begin(), k.kappa.end());
  k.tau_kappa = 64.0 * std::numeric_limits<double>::epsilon() * kmax;
  return k;
}

KernelWeights build_kernel_cached(const Window& window, double s, double p, const std::filesystem::path& cache_dir) {
  char key[256];
  std::snprintf(key, sizeof key, "%d|%.17g|%d|%d|%d|%d|%.17g|%.17g", window.dim, window.h, window.k1_lo, window.n1,
                window.k2_lo, window.n2, s, p);
  char name[64];
  std::snprintf(name, sizeof name, "kernel_%016zx.bin", std::hash<std::string>{}(key));
  const std::filesystem::path file = cache_dir / name;

  std::ifstream in(file, std::ios::binary);
  if (in) {
    std::uint64_t magic = 0;
    Window w;
    double fs = 0.0;
    double fp = 0.0;
    double tau = 0.0;
    std::uint64_t n = 0;
    bool ok = read_pod(in, magic) && magic == kCacheMagic && read_pod(in, w.dim) && read_pod(in, w.h) &&
              read_pod(in, w.k1_lo) && read_pod(in, w.n1) && read_pod(in, w.k2_lo) && read_pod(in, w.n2) &&
              read_pod(in, fs) && read_pod(in, fp) && read_pod(in, tau) && read_pod(in, n);
    if (ok && w == window && fs == s && fp == p && n == window.size()) {
      KernelWeights k;
      k.s = s;
      k.p = p;
      k.window = window;
      k.tau_kappa = tau;
      k.w.resize(n * n);
      k.kappa.resize(n);
      in.read(reinterpret_cast<char*>(k.w.data()), static_cast<std::streamsize>(n * n * sizeof(double)));
      in.read(reinterpret_cast<char*>(k.kappa.data()), static_cast<std::streamsize>(n * sizeof(double)));
      if (in) {
        return k;
      }
    }
  }

  KernelWeights k = build_kernel(window, s, p);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write kernel cache " + file.string());
  }
  const std::uint64_t n = k.size();
  write_pod(out, kCacheMagic);
  write_pod(out, window.dim);
  write_pod(out, window.h);
  write_pod(out, window.k1_lo);
  write_pod(out, window.n1);
  write_pod(out, window.k2_lo);
  write_pod(out, window.n2);
  write_pod(out, s);
  write_pod(out, p);
  write_pod(out, k.tau_kappa);
  write_pod(out, n);
  out.write(reinterpret_cast<const char*>(k.w.data()), static_cast<std::streamsize>(n * n * sizeof(double)));
  out.write(reinterpret_cast<const char*>(k.kappa.data()), static_cast<std::streamsize>(n * sizeof(double)));
  return k;
}

bool check_kernel_condition(const KernelWeights& k, const ReflectionParam& a) {
  const Window& win = k.window;
  if (!win.closed_under(a)) {
    throw PreconditionError("kernel window is not closed under the reflection");
  }
  const std::size_t n = k.size();
  std::vector<std::size_t> mirror(n);
  std::vector<std::size_t> upper;
  for (std::size_t i = 0; i < n; ++i) {
    mirror[i] = *win.find(a.reflect(win.k1(i)), win.k2(i));
    if (a.side(win.k1(i)) > 0) {
      upper.push_back(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(k.kappa[i] >= 0.0) || k.kappa[i] != k.kappa[mirror[i]]) {
      return false;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(k(i, j) > 0.0) || k(i, j) != k(j, i)) {
        return false;
      }
    }
  }
  for (std::size_t x : upper) {
    for (std::size_t y : upper) {
      if (x == y) {
        continue;
      }
      const double direct = k(x, y);
      const double crossed = k(mirror[x], y);
      if (direct != k(mirror[x], mirror[y]) || crossed != k(x, mirror[y]) || !(direct > crossed)) {
        return false;
      }
    }
  }
  return true;
}

} // namespace fraclap
