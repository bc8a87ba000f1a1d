#pragma once

#include <vector>

#include "fracsing/green_operator.hpp"
#include "fracsing/halpha_form.hpp"
#include "fracsing/params.hpp"
#include "fracsing/picard.hpp"
#include "fracsing/radial_function.hpp"

namespace fracsing {

/// sigma1 = 1 / spectral radius of xi -> p G[u^{p-1} xi].
struct StabilityReport {
  double sigma1 = 0.0;
  /// u vanishes identically: sigma1 = +infinity by convention, `sigma1` is not meaningful.
  bool infinite = false;
  /// Principal eigenfunction xi_1 > 0 with unit weighted L2 norm.
  RadialFunction eigfun;
  /// 1 - 1/sigma1: min of (||xi||^2_alpha - p int u^{p-1} xi^2) / ||xi||^2_alpha.
  double gap = 0.0;
  int iterations = 0;

  [[nodiscard]] bool stable() const { return infinite || sigma1 > 1.0; }
  [[nodiscard]] bool semi_stable() const { return infinite || sigma1 >= 1.0; }
};

/// Operator route (power iteration in the inner product weighted by w p u^{p-1}).
StabilityReport sigma1(const RadialFunction& u, const ProblemParams& params, const GreenOperator& op,
                       double tol = 1e-10, int max_iter = 50000);

/// Dense oracle: largest eigenvalue of Q^{1/2} K Q^{1/2}, Q = diag(w p u^{p-1}).
double sigma1_dense(const RadialFunction& u, const ProblemParams& params, const GreenOperator& op);

/// Rayleigh-quotient route: min of xi^T A xi / (p sum w u^{p-1} xi^2) with the H^alpha form.
double sigma1_rayleigh(const RadialFunction& u, const ProblemParams& params,
                       const DiscreteHAlphaForm& form);

struct StabilitySample {
  double k = 0.0;
  double sigma1 = 0.0;
  double gap = 0.0;
  /// (k*)^{(p-1)/p} - k^{(p-1)/p} with k* taken as k_lo.
  double distance = 0.0;
};

struct StabilityScan {
  std::vector<StabilitySample> samples;
  /// Least-squares slope (through the origin) of gap against distance.
  double slope = 0.0;
  bool nonincreasing = true;
};

/// Samples k_j = k_lo (0.1 + 0.9 (j+1)/n), j = 0..n-1.  Throws NumericalError if
/// sigma1 increases with k beyond `monotone_tol` (relative).
StabilityScan stability_gap_scan(const ProblemParams& params, const GreenOperator& op,
                                 const KStarBracket& bracket, int n_samples,
                                 const SolveOptions& opts = {}, double monotone_tol = 1e-9);

}  // namespace fracsing
