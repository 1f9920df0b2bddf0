#pragma once

#include <cstdint>

namespace fraclap {

// J(alpha, beta) = |alpha-beta|^{p-2} (alpha-beta) (alpha^+ - beta^+)
double four_point_J(double alpha, double beta, double p);

struct FourPointInput {
  double a = 0.0;
  double A = 0.0;
  double b = 0.0;
  double B = 0.0;
  double p = 2.0;
};

struct FourPointResult {
  double expr = 0.0;     // J(A,B) - J(a,B) - J(A,b) + J(a,b)
  double integral = 0.0; // I = int_a^A int_b^B |alpha-beta|^{p-2}(theta(alpha)+theta(beta))
  double lower = 0.0;    // -(p-1) max{1,p-1} I
  double upper = 0.0;    // -(p-1) min{1,p-1} I
  double tau = 0.0;      // 1e-8 (|expr| + 1)
  bool equality = false;          // expr == 0
  bool equality_expected = false; // A <= 0 and B <= 0
  bool ok = false;                // bounds hold and equality matches
};

// Throws PreconditionError unless a < A, b < B, p > 1, and ConvergenceError if the
// quadrature for I misses its tolerance.
FourPointResult four_point_check(const FourPointInput& in);

// I alone, by adaptive tanh-sinh in alpha (resp. beta) with the inner integral done exactly.
double four_point_integral(const FourPointInput& in);

// Nested quadrature of the mixed derivative d^2 J / d alpha d beta over [a,A] x [b,B].
double four_point_mixed_integral(const FourPointInput& in);

struct A3Result {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0; // lhs - rhs
  double scale = 0.0; // |U - V|^p
  bool equality = false;          // |lhs - rhs| <= 1e-12 scale
  bool equality_analytic = false; // U V == 0 or alpha == beta
  bool ok = false;                // slack >= -1e-12 scale
};

// Needs U V <= 0 and alpha^2 + beta^2 = 1 (to 1e-12); PreconditionError otherwise.
A3Result pointwise_check_A3(double U, double V, double alpha, double beta, double p);

struct A4Result {
  double slack1 = 0.0;
  double slack2 = 0.0;
  double scale = 0.0;
  bool ineq1_ok = false;
  bool ineq2_ok = false;
};

// Needs U V <= 0 and 0 <= s <= 1.
A4Result pointwise_check_A4(double U, double V, double s, double p);

// Seeded random sweep over all three checks at one p. Four-point corners are uniform in
// [-3,3] and sorted into a < A, b < B; A.3/A.4 inputs have U in [0,3], V in [-3,0] (sign
// order shuffled), (alpha, beta) uniform on the circle, s uniform in [0,1].
struct InequalitySweep {
  double p = 2.0;
  int samples = 0;
  int four_point_failures = 0;        // bounds or equality flag wrong
  int four_point_equality_cases = 0;  // samples with A <= 0 and B <= 0
  int a3_violations = 0;
  int a3_equality_hits = 0;           // numerical equality flag raised
  int a4_violations = 0;
  double worst_a3_slack = 0.0;        // min slack / scale
  double worst_a4_slack = 0.0;
  bool ok() const { return four_point_failures == 0 && a3_violations == 0 && a4_violations == 0; }
};

InequalitySweep sweep_inequalities(double p, int samples, std::uint64_t seed);

} // namespace fraclap
