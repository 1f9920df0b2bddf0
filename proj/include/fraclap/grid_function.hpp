#pragma once

#include "fraclap/lattice.hpp"

#include <vector>

namespace fraclap {

// h^N, the volume of one lattice cell.
double cell_volume(const Window& w);

// Real values on every node of a window. Nodes outside the window are implicitly 0.
struct GridFunction {
  Window window;
  std::vector<double> values;

  static GridFunction zeros(const Window& w);
  static GridFunction from_values(const Window& w, std::vector<double> values);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  // u = u^+ + u^-, with u^- = min(u, 0) <= 0.
  GridFunction pos() const;
  GridFunction neg() const;

  GridFunction scaled(double c) const;
  GridFunction plus(const GridFunction& other) const;

  // Zero-extension to a larger window.
  GridFunction embedded(const Window& larger) const;
  // Restriction to a sub-window; throws PreconditionError if a nonzero value would be dropped.
  GridFunction restricted(const Window& smaller) const;

  // Every nonzero value sits on a mask node of d (d.box must equal the window).
  bool supported_in(const LatticeDomain& d) const;

  double max_abs() const;
  bool has_positive() const;
  bool has_negative() const;

  bool operator==(const GridFunction&) const = default;
};

// h^N sum |u|^p
double lp_norm_p(const GridFunction& u, double p);

} // namespace fraclap
