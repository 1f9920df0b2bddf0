#include "fraclap/grid_function.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fraclap {

double cell_volume(const Window& w) { return w.dim == 2 ? w.h * w.h : w.h; }

GridFunction GridFunction::zeros(const Window& w) { return GridFunction{w, std::vector<double>(w.size(), 0.0)}; }

GridFunction GridFunction::from_values(const Window& w, std::vector<double> values) {
  if (values.size() != w.size()) {
    throw PreconditionError("value count does not match the window");
  }
  return GridFunction{w, std::move(values)};
}

GridFunction GridFunction::pos() const {
  GridFunction out = *this;
  for (double& x : out.values) {
    x = x > 0.0 ? x : 0.0;
  }
  return out;
}

GridFunction GridFunction::neg() const {
  GridFunction out = *this;
  for (double& x : out.values) {
    x = x < 0.0 ? x : 0.0;
  }
  return out;
}

GridFunction GridFunction::scaled(double c) const {
  GridFunction out = *this;
  for (double& x : out.values) {
    x *= c;
  }
  return out;
}

GridFunction GridFunction::plus(const GridFunction& other) const {
  if (!(other.window == window)) {
    throw PreconditionError("window mismatch");
  }
  GridFunction out = *this;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.values[i] += other.values[i];
  }
  return out;
}

GridFunction GridFunction::embedded(const Window& larger) const {
  if (larger == window) {
    return *this;
  }
  if (!larger.contains(window)) {
    throw PreconditionError("target window does not contain the support window");
  }
  GridFunction out = zeros(larger);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.values[*larger.find(window.k1(i), window.k2(i))] = values[i];
  }
  return out;
}

GridFunction GridFunction::restricted(const Window& smaller) const {
  if (smaller == window) {
    return *this;
  }
  if (!window.contains(smaller)) {
    throw PreconditionError("window mismatch");
  }
  GridFunction out = zeros(smaller);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto j = smaller.find(window.k1(i), window.k2(i));
    if (j) {
      out.values[*j] = values[i];
    } else if (values[i] != 0.0) {
      throw PreconditionError("function is not supported in the target window");
    }
  }
  return out;
}

bool GridFunction::supported_in(const LatticeDomain& d) const {
  if (!(d.box == window)) {
    return false;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0 && !d.inside(i)) {
      return false;
    }
  }
  return true;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double x : values) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

bool GridFunction::has_positive() const {
  return std::any_of(values.begin(), values.end(), [](double x) { return x > 0.0; });
}

bool GridFunction::has_negative() const {
  return std::any_of(values.begin(), values.end(), [](double x) { return x < 0.0; });
}

double lp_norm_p(const GridFunction& u, double p) {
  double s = 0.0;
  for (double x : u.values) {
    s += std::pow(std::abs(x), p);
  }
  return cell_volume(u.window) * s;
}

} // namespace fraclap
