#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fraclap {

class ReflectionParam;

// Rectangular block of cell-centred lattice nodes in one or two dimensions.
//
// Nodes are addressed by odd "half-indices" k, with coordinate x = k*h/2, so a
// reflection x1 -> 2a - x1 with a a multiple of h/2 maps nodes onto nodes.
// Storage order is row-major with x1 fastest: rows run parallel to e1.
struct Window {
  int dim = 1;
  double h = 1.0;
  int k1_lo = -1; // odd half-index of the first column
  int n1 = 2;
  int k2_lo = 0; // odd half-index of the first row (dim 2); 0 in dim 1
  int n2 = 1;

  // Symmetric box [-L1, L1] (x [-L2, L2]); each L must be a positive integer multiple of h.
  static Window symmetric(int dim, double h, std::array<double, 2> half_extent);

  std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
  std::size_t index(int i1, int i2 = 0) const { return static_cast<std::size_t>(i2) * n1 + i1; }
  int col(std::size_t idx) const { return static_cast<int>(idx % static_cast<std::size_t>(n1)); }
  int row(std::size_t idx) const { return static_cast<int>(idx / static_cast<std::size_t>(n1)); }

  int k1_hi() const { return k1_lo + 2 * (n1 - 1); }
  int k2_hi() const { return k2_lo + 2 * (n2 - 1); }
  int k1(std::size_t idx) const { return k1_lo + 2 * col(idx); }
  int k2(std::size_t idx) const { return dim == 2 ? k2_lo + 2 * row(idx) : 0; }

  double x1(std::size_t idx) const { return 0.5 * h * k1(idx); }
  double x2(std::size_t idx) const { return 0.5 * h * k2(idx); }
  std::array<double, 2> coords(std::size_t idx) const { return {x1(idx), x2(idx)}; }

  // Outer cell edges: the window is the union of the h-cells around its nodes.
  double x1_lo_edge() const { return 0.5 * h * (k1_lo - 1); }
  double x1_hi_edge() const { return 0.5 * h * (k1_hi() + 1); }
  double x2_lo_edge() const { return dim == 2 ? 0.5 * h * (k2_lo - 1) : 0.0; }
  double x2_hi_edge() const { return dim == 2 ? 0.5 * h * (k2_hi() + 1) : 0.0; }

  std::optional<std::size_t> find(int k1, int k2 = 0) const;

  // True when `other` has the same spacing/rows and its nodes are a subset of ours.
  bool contains(const Window& other) const;
  bool closed_under(const ReflectionParam& a) const;

  // Smallest window containing this window and its mirror image under sigma_a.
  // The result is closed under sigma_a.
  Window reflected_hull(const ReflectionParam& a) const;

  bool operator==(const Window&) const = default;
};

// Reflection hyperplane H_a = {x1 = a}, with a restricted to integer multiples of h/2.
class ReflectionParam {
public:
  ReflectionParam(int half_steps, double h) : m_(half_steps), h_(h) {}
  // Throws ParameterError unless a is an integer multiple of h/2 (to 1e-9 relative).
  static ReflectionParam from_value(double a, double h);

  int half_steps() const { return m_; }
  double h() const { return h_; }
  double value() const { return 0.5 * h_ * m_; }

  int reflect(int k1) const { return 2 * m_ - k1; }
  double reflect(double x1) const { return 2.0 * value() - x1; }
  // +1 on Sigma_a^+ (x1 > a), -1 on Sigma_a^-, 0 on H_a.
  int side(int k1) const { return k1 > m_ ? 1 : (k1 < m_ ? -1 : 0); }

private:
  int m_;
  double h_;
};

// A discretized domain: a bounding box of nodes plus the membership mask of Omega.
struct LatticeDomain {
  Window box;
  std::vector<std::uint8_t> mask;

  static LatticeDomain from_mask(const Window& box, std::vector<std::uint8_t> mask);

  bool inside(std::size_t idx) const { return mask[idx] != 0; }
  std::size_t count() const;
  std::vector<std::size_t> nodes() const;
  // Same mask on a larger window (false on the added nodes).
  LatticeDomain embedded(const Window& larger) const;
  bool operator==(const LatticeDomain&) const = default;
};

// Cross-section coordinate x2 -> half-width of the x1-section. In dim 1 it is called with 0.
using HalfWidth = std::function<double(double)>;

// mask(x1, x2) = |x1| < half_width(x2). Throws DomainError("degenerate domain") on an empty mask.
LatticeDomain make_steiner_domain(const HalfWidth& half_width, const Window& box);

// Symmetric under sigma_0 and every row's mask nodes form one contiguous run.
bool check_steiner(const LatticeDomain& d);

enum class Variant { P, PTilde };

// Set polarization on the sigma_a-closed hull of the box. Node-wise this is the
// function polarization of the indicator of Omega.
LatticeDomain polarize_mask(const LatticeDomain& d, const ReflectionParam& a, Variant variant);

// Exterior box nodes with a face-neighbour in the mask. Throws DomainError when the
// mask reaches the box frame, since part of the boundary would fall outside the box.
std::vector<std::size_t> discrete_boundary(const LatticeDomain& d);

// Row-scan partition of the discrete boundary. In every row that meets the mask the
// leftmost boundary node goes to `left`, the rightmost to `right`; all other
// boundary nodes go to `cylinder`.
struct BoundaryLids {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  std::vector<std::size_t> cylinder;
};

BoundaryLids boundary_lids(const LatticeDomain& d);

} // namespace fraclap
