#pragma once

// Helpers shared by the eigenvalue and Nehari solvers. Not installed.

#include "fraclap/domain_operator.hpp"
#include "fraclap/eigensolver.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fraclap::detail {

// Sign-changing starting profile number `id` on the unknowns of op:
// 0 odd in x1, 1 shifted bump minus half its max, >= 2 seeded noise with the median removed.
std::vector<double> start_profile(const DomainOperator& op, int id, std::uint64_t seed, std::string& name);

// Positive profile for one-signed problems.
std::vector<double> positive_profile(const DomainOperator& op);

// When x lost its positive or negative part, put back the lost sign on the nodes where
// `previous` had it, with magnitude 1e-8 max|x|. False if nothing can be restored.
bool restore_signs(std::vector<double>& x, std::span<const double> previous);

bool has_both_signs(std::span<const double> x);

double max_abs(std::span<const double> x);

// Relative eigen-equation residual max_k |g_k/p - lambda h^N phi(x_k)| / (lambda h^N max|x|^{p-1}),
// where g = d[x]^p/dx.
double eigen_residual(std::span<const double> g, std::span<const double> x, double lambda, double p, double vol);

// Root of a nondecreasing f on [-smax, smax], bracketed outward from [-0.5, 0.5] and refined
// with TOMS 748. False when no sign change is found.
bool increasing_root(const std::function<double(double)>& f, double smax, double& s);

// Index of the usable outcome with the lowest value; among values within 1e-9 relative of
// that minimum a converged run is preferred. -1 when none is usable.
int pick_best(const std::vector<MultistartOutcome>& outcomes);

} // namespace fraclap::detail
