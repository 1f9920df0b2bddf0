#pragma once

#include "fraclap/config.hpp"
#include "fraclap/grid_function.hpp"
#include "fraclap/lattice.hpp"

#include <array>
#include <string>
#include <vector>

namespace fraclap {

// Node indices of d.box.
struct SupportSets {
  std::vector<std::size_t> plus;  // u > tau
  std::vector<std::size_t> minus; // u < -tau
  // Mask nodes whose cell carries part of the nodal set: |u| <= tau, or a face
  // neighbour in the mask with the opposite strict sign (both beyond tau).
  std::vector<std::size_t> nodal;
  double tau = 0.0; // tau_rel * max|u|
};

// Throws PreconditionError when u vanishes identically.
SupportSets support_sets(const GridFunction& u, const LatticeDomain& d, double tau_rel);

// Smallest Euclidean distance from a support node to a node of discrete_boundary(d).
double support_distance(const std::vector<std::size_t>& support, const LatticeDomain& d);

// Largest k h (k >= 0) such that the support shifted by k nodes along +e1 stays in the mask.
double slide_distance(const std::vector<std::size_t>& support, const LatticeDomain& d);

// Iterates sigma_a, sigma_0, sigma_a, ... from x; the start is not listed. Stops after the
// first iterate outside the window's outer cell edges (which is listed) or after max_iter.
std::vector<std::array<double, 2>> reflection_chain(std::array<double, 2> x, const ReflectionParam& a,
                                                    const Window& window, int max_iter);

// Connectivity of the mask under face adjacency.
bool mask_connected(const LatticeDomain& d);

struct LidTouch {
  double left = 0.0; // distances; +inf for an empty lid
  double right = 0.0;
  double cylinder = 0.0;
  bool touches_left = false;
  bool touches_right = false;
  bool touches_cylinder = false;
};

LidTouch lid_touch(const std::vector<std::size_t>& support, const LatticeDomain& d, double threshold);

struct SweepEntry {
  int half_steps = 0;
  double a = 0.0;
  double deficit_plus = 0.0;
  double deficit_minus = 0.0;
  double seminorm_deficit = 0.0;
  double eps_num = 0.0;
  std::string equality;
  bool ok = false; // all three deficits >= -eps_num
};

struct PayneReport {
  std::string mode;   // eigen | lens
  double value = 0.0; // mu2 or the LENS level
  int iterations = 0;
  double h = 0.0;
  double threshold = 0.0; // touch threshold in length units
  double tau = 0.0;
  std::size_t n_plus = 0, n_minus = 0, n_nodal = 0;
  double dist_plus = 0.0;
  double dist_minus = 0.0;
  double dist_nodal = 0.0; // +inf when no nodal cell was found
  double slide_plus = 0.0;
  double slide_minus = 0.0;
  LidTouch lid_plus;
  LidTouch lid_minus;
  bool connected = false;
  bool supports_touch = false; // both support distances <= threshold
  bool nodal_touch = false;    // nodal-cell distance <= threshold
  bool lid_consistent = false; // a touching support touches some lid
  std::vector<SweepEntry> sweep;
  bool sweep_ok = false;
  bool ok = false; // supports_touch, lid_consistent, sweep_ok, and nodal_touch when connected
  GridFunction u;
};

// Geometry and polarization diagnostics of a computed u on a Steiner-symmetric d.
// The sweep uses a = m h/2, m = 1..sweep_half_steps, each on the sigma_a-closed hull of d.box.
PayneReport payne_diagnostics(const GridFunction& u, const LatticeDomain& d, double s, double p, double tau_rel,
                              double threshold_h, int sweep_half_steps, const std::string& kernel_cache = "");

// Solves for u (mode eigen: second eigenfunction; mode lens: least energy nodal solution)
// and runs payne_diagnostics on it.
PayneReport run_payne_experiment(const ExperimentConfig& c);

} // namespace fraclap
