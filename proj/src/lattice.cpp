#include "fraclap/lattice.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fraclap {

namespace {

int nodes_across(double half_extent, double h, const char* axis) {
  if (!(h > 0.0) || !(half_extent > 0.0)) {
    throw ParameterError(std::string("box half-extent and spacing must be positive (axis ") + axis + ")");
  }
  const double ratio = 2.0 * half_extent / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || static_cast<long>(rounded) % 2 != 0) {
    throw ParameterError(std::string("box half-extent must be an integer multiple of h (axis ") + axis + ")");
  }
  return static_cast<int>(rounded);
}

} // namespace

Window Window::symmetric(int dim, double h, std::array<double, 2> half_extent) {
  if (dim != 1 && dim != 2) {
    throw ParameterError("dimension must be 1 or 2");
  }
  Window w;
  w.dim = dim;
  w.h = h;
  w.n1 = nodes_across(half_extent[0], h, "x1");
  w.k1_lo = 1 - w.n1;
  if (dim == 2) {
    w.n2 = nodes_across(half_extent[1], h, "x2");
    w.k2_lo = 1 - w.n2;
  } else {
    w.n2 = 1;
    w.k2_lo = 0;
  }
  return w;
}

std::optional<std::size_t> Window::find(int k1, int k2) const {
  const int d1 = k1 - k1_lo;
  if (d1 < 0 || d1 % 2 != 0 || d1 / 2 >= n1) {
    return std::nullopt;
  }
  int i2 = 0;
  if (dim == 2) {
    const int d2 = k2 - k2_lo;
    if (d2 < 0 || d2 % 2 != 0 || d2 / 2 >= n2) {
      return std::nullopt;
    }
    i2 = d2 / 2;
  }
  return index(d1 / 2, i2);
}

bool Window::contains(const Window& other) const {
  if (other.dim != dim || std::abs(other.h - h) > 1e-12 * h) {
    return false;
  }
  if (other.k1_lo < k1_lo || other.k1_hi() > k1_hi()) {
    return false;
  }
  if (dim == 2 && (other.k2_lo < k2_lo || other.k2_hi() > k2_hi())) {
    return false;
  }
  return true;
}

bool Window::closed_under(const ReflectionParam& a) const {
  return k1_lo + k1_hi() == 2 * a.half_steps();
}

Window Window::reflected_hull(const ReflectionParam& a) const {
  const int lo = std::min(k1_lo, a.reflect(k1_hi()));
  const int hi = std::max(k1_hi(), a.reflect(k1_lo));
  Window w = *this;
  w.k1_lo = lo;
  w.n1 = (hi - lo) / 2 + 1;
  return w;
}

ReflectionParam ReflectionParam::from_value(double a, double h) {
  if (!(h > 0.0)) {
    throw ParameterError("spacing must be positive");
  }
  const double m = 2.0 * a / h;
  const double rounded = std::round(m);
  if (std::abs(m - rounded) > 1e-9 * std::max(1.0, std::abs(m))) {
    throw ParameterError("reflection parameter must be an integer multiple of h/2");
  }
  return ReflectionParam(static_cast<int>(rounded), h);
}

LatticeDomain LatticeDomain::from_mask(const Window& box, std::vector<std::uint8_t> mask) {
  if (mask.size() != box.size()) {
    throw DomainError("mask size does not match the box");
  }
  return LatticeDomain{box, std::move(mask)};
}

std::size_t LatticeDomain::count() const {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; }));
}

std::vector<std::size_t> LatticeDomain::nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      out.push_back(i);
    }
  }
  return out;
}

LatticeDomain LatticeDomain::embedded(const Window& larger) const {
  if (!larger.contains(box)) {
    throw DomainError("target window does not contain the domain box");
  }
  LatticeDomain out{larger, std::vector<std::uint8_t>(larger.size(), 0)};
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (mask[i]) {
      out.mask[*larger.find(box.k1(i), box.k2(i))] = 1;
    }
  }
  return out;
}

LatticeDomain make_steiner_domain(const HalfWidth& half_width, const Window& box) {
  LatticeDomain d{box, std::vector<std::uint8_t>(box.size(), 0)};
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double w = half_width(box.x2(i));
    if (w < 0.0) {
      throw DomainError("half-width must be nonnegative");
    }
    d.mask[i] = std::abs(box.x1(i)) < w ? 1 : 0;
  }
  if (d.count() == 0) {
    throw DomainError("degenerate domain");
  }
  return d;
}

bool check_steiner(const LatticeDomain& d) {
  const Window& b = d.box;
  for (int i2 = 0; i2 < b.n2; ++i2) {
    int runs = 0;
    bool prev = false;
    for (int i1 = 0; i1 < b.n1; ++i1) {
      const std::size_t idx = b.index(i1, i2);
      const bool in = d.inside(idx);
      const auto mirror = b.find(-b.k1(idx), b.k2(idx));
      const bool mirror_in = mirror && d.inside(*mirror);
      if (in != mirror_in) {
        return false;
      }
      if (in) {
        if (!prev) {
          ++runs;
        }
      }
      prev = in;
    }
    if (runs > 1) {
      return false;
    }
  }
  return true;
}

LatticeDomain polarize_mask(const LatticeDomain& d, const ReflectionParam& a, Variant variant) {
  const Window hull = d.box.reflected_hull(a);
  const LatticeDomain src = d.embedded(hull);
  LatticeDomain out{hull, std::vector<std::uint8_t>(hull.size(), 0)};
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const int k1 = hull.k1(i);
    const std::size_t j = *hull.find(a.reflect(k1), hull.k2(i));
    const bool here = src.inside(i);
    const bool there = src.inside(j);
    int side = a.side(k1);
    if (variant == Variant::PTilde) {
      side = -side;
    }
    bool value = here;
    if (side > 0) {
      value = here && there;
    } else if (side < 0) {
      value = here || there;
    }
    out.mask[i] = value ? 1 : 0;
  }
  return out;
}

std::vector<std::size_t> discrete_boundary(const LatticeDomain& d) {
  const Window& b = d.box;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const int i1 = b.col(i);
    const int i2 = b.row(i);
    const bool on_frame = i1 == 0 || i1 == b.n1 - 1 || (b.dim == 2 && (i2 == 0 || i2 == b.n2 - 1));
    if (d.inside(i)) {
      if (on_frame) {
        throw DomainError("mask reaches the bounding-box frame; enlarge the box");
      }
      continue;
    }
    bool touches = (i1 > 0 && d.inside(i - 1)) || (i1 + 1 < b.n1 && d.inside(i + 1));
    if (b.dim == 2) {
      touches = touches || (i2 > 0 && d.inside(i - b.n1)) || (i2 + 1 < b.n2 && d.inside(i + b.n1));
    }
    if (touches) {
      out.push_back(i);
    }
  }
  return out;
}

BoundaryLids boundary_lids(const LatticeDomain& d) {
  if (!check_steiner(d)) {
    throw DomainError("boundary lids need a Steiner-symmetric domain");
  }
  const Window& b = d.box;
  const std::vector<std::size_t> boundary = discrete_boundary(d);
  BoundaryLids lids;
  // discrete_boundary returns nodes in storage order, i.e. grouped by row, ascending x1.
  std::size_t pos = 0;
  while (pos < boundary.size()) {
    const int row = b.row(boundary[pos]);
    std::size_t end = pos;
    while (end < boundary.size() && b.row(boundary[end]) == row) {
      ++end;
    }
    bool row_meets_mask = false;
    for (int i1 = 0; i1 < b.n1; ++i1) {
      row_meets_mask = row_meets_mask || d.inside(b.index(i1, row));
    }
    if (row_meets_mask) {
      lids.left.push_back(boundary[pos]);
      lids.right.push_back(boundary[end - 1]);
      for (std::size_t q = pos + 1; q + 1 < end; ++q) {
        lids.cylinder.push_back(boundary[q]);
      }
    } else {
      lids.cylinder.insert(lids.cylinder.end(), boundary.begin() + static_cast<std::ptrdiff_t>(pos),
                           boundary.begin() + static_cast<std::ptrdiff_t>(end));
    }
    pos = end;
  }
  std::sort(lids.cylinder.begin(), lids.cylinder.end());
  return lids;
}

} // namespace fraclap
