#pragma once

#include <span>
#include <vector>

#include "fracsing/green_operator.hpp"
#include "fracsing/params.hpp"

namespace fracsing {

/// Least-squares line through (log r_i, log |f_i|) for nodes i in [first, last).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  int points = 0;
};

/// Fits on the innermost decade [r_{skip}, 10 r_{skip}] of the grid.
/// Throws InvalidArgument if fewer than 4 nodes fall in the window or if the
/// grid does not span two decades.
LogLogFit innermost_decade_fit(std::span<const double> nodes, std::span<const double> values,
                               int skip = 3);

/// Small-r behaviour of G[G[delta]^p], by the size of tau = p (N - 2 alpha) against 2 alpha.
enum class CompositionRegime { Bounded, Logarithmic, Power };

const char* to_string(CompositionRegime regime);

CompositionRegime composition_regime(const ProblemParams& params);

/// G[d^p] with d the Dirac column of the operator.
std::vector<double> composed_dirac(const GreenOperator& op, double p);

/// c2 = max_i G[d^p]_i / d_i, the working constant of G[G^p[delta]] <= c2 G[delta].
double measure_c2(const GreenOperator& op, double p);

struct ComposeReport {
  CompositionRegime regime = CompositionRegime::Bounded;
  /// Predicted small-r exponent of the composed profile (0 for Bounded/Logarithmic).
  double predicted_exponent = 0.0;
  /// Log-log slope of the composed profile on the innermost decade.
  double fitted_exponent = 0.0;
  /// Slope of composed / |log r| (meaningful in the logarithmic regime).
  double fitted_log_slope = 0.0;
  /// Whether the measured profile is consistent with the predicted regime.
  bool regime_consistent = false;
  double c2 = 0.0;
  /// c2 on the refined operator, and |c2_refined / c2 - 1|; zero if no refinement given.
  double c2_refined = 0.0;
  double refinement_change = 0.0;
};

/// Verifies the three-regime bound on G[G^p[delta]] and measures c2.
/// With `refined` (same params on a finer grid), throws NumericalError if c2
/// changes by more than `max_change` relatively.
ComposeReport compose_estimate_check(const ProblemParams& params, const GreenOperator& op,
                                     const GreenOperator* refined = nullptr,
                                     double max_change = 0.25);

}  // namespace fracsing
