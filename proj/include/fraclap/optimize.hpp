#pragma once

#include <functional>
#include <vector>

namespace fraclap {

// Limited-memory BFGS on a function that is invariant under a retraction R:
// every trial point is x_new = R(x + alpha d, x) and accepted by an Armijo test.
struct RetractedProblem {
  // Value and gradient at a retracted point.
  std::function<double(const std::vector<double>& x, std::vector<double>& grad)> evaluate;
  // Maps a trial point to the feasible set in place. `previous` is the last accepted
  // point. Returns false if the trial cannot be retracted.
  std::function<bool(std::vector<double>& x, const std::vector<double>& previous)> retract;
  // Stopping test on an accepted point.
  std::function<bool(const std::vector<double>& x, double f, const std::vector<double>& grad)> converged;
};

struct LbfgsOptions {
  int memory = 10;
  int max_iter = 2000;
  int max_backtracks = 40;
  double armijo = 1e-4;
  double first_step = 0.05; // first step moves max|x| by this fraction
  int stall_window = 25;    // stop after this many iterations without relative progress > stall_rel
  double stall_rel = 1e-15;
};

struct LbfgsResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> grad;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;
  std::vector<double> history; // objective after every accepted step
};

// x0 is retracted first. Accepted steps never increase f.
LbfgsResult minimize_lbfgs(const RetractedProblem& prob, std::vector<double> x0, const LbfgsOptions& opt);

} // namespace fraclap
