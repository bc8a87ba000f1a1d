#include "fracsing/compose.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracsing/errors.hpp"

namespace fracsing {

LogLogFit innermost_decade_fit(std::span<const double> nodes, std::span<const double> values,
                               int skip) {
  if (nodes.size() != values.size() || nodes.size() < static_cast<std::size_t>(skip + 4)) {
    throw InvalidArgument("log-log fit: not enough nodes");
  }
  if (nodes.back() < 100.0 * nodes.front()) {
    throw InvalidArgument("log-log fit: grid resolves less than two decades near the origin");
  }
  LogLogFit fit;
  fit.r_lo = nodes[static_cast<std::size_t>(skip)];
  fit.r_hi = 10.0 * fit.r_lo;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = static_cast<std::size_t>(skip); i < nodes.size() && nodes[i] <= fit.r_hi; ++i) {
    if (!(values[i] != 0.0)) {
      continue;
    }
    const double x = std::log(nodes[i]);
    const double y = std::log(std::abs(values[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.points;
  }
  if (fit.points < 4) {
    throw InvalidArgument("log-log fit: fewer than 4 usable nodes in the innermost decade");
  }
  const double n = fit.points;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

const char* to_string(CompositionRegime regime) {
  switch (regime) {
    case CompositionRegime::Bounded: return "bounded";
    case CompositionRegime::Logarithmic: return "logarithmic";
    case CompositionRegime::Power: return "power";
  }
  return "unknown";
}

CompositionRegime composition_regime(const ProblemParams& params) {
  const double tau = params.p * (params.dim - 2.0 * params.alpha);
  const double gap = tau - 2.0 * params.alpha;
  if (std::abs(gap) <= 1e-12 * std::max(1.0, tau)) {
    return CompositionRegime::Logarithmic;
  }
  return gap > 0.0 ? CompositionRegime::Power : CompositionRegime::Bounded;
}

std::vector<double> composed_dirac(const GreenOperator& op, double p) {
  std::vector<double> dp(op.dirac_column().begin(), op.dirac_column().end());
  for (auto& v : dp) {
    v = std::pow(v, p);
  }
  return op.apply(dp);
}

double measure_c2(const GreenOperator& op, double p) {
  const auto h = composed_dirac(op, p);
  double c2 = 0.0;
  for (int i = 0; i < op.size(); ++i) {
    c2 = std::max(c2, h[static_cast<std::size_t>(i)] / op.dirac_column()[static_cast<std::size_t>(i)]);
  }
  if (!std::isfinite(c2)) {
    throw NumericalError("c2 ratio is not finite");
  }
  return c2;
}

ComposeReport compose_estimate_check(const ProblemParams& params, const GreenOperator& op,
                                     const GreenOperator* refined, double max_change) {
  params.validate();
  if (!params.subcritical()) {
    throw InvalidRegime("composition estimate needs p < N/(N-2 alpha)");
  }
  ComposeReport rep;
  rep.regime = composition_regime(params);
  const auto h = composed_dirac(op, params.p);
  const auto nodes = op.grid()->nodes();

  const auto fit = innermost_decade_fit(nodes, h);
  rep.fitted_exponent = fit.slope;

  std::vector<double> per_log(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    per_log[i] = h[i] / std::abs(std::log(nodes[i]));
  }
  rep.fitted_log_slope = innermost_decade_fit(nodes, per_log).slope;

  switch (rep.regime) {
    case CompositionRegime::Power:
      rep.predicted_exponent = params.p * params.singular_exponent() + 2.0 * params.alpha;
      rep.regime_consistent = std::abs(rep.fitted_exponent - rep.predicted_exponent) <= 0.05;
      break;
    case CompositionRegime::Logarithmic:
      // h ~ C |log r|: h / |log r| tends to a constant.
      rep.regime_consistent = std::abs(rep.fitted_log_slope) <= 0.05;
      break;
    case CompositionRegime::Bounded:
      rep.regime_consistent = rep.fitted_exponent >= -0.05;
      break;
  }

  rep.c2 = measure_c2(op, params.p);
  if (refined != nullptr) {
    rep.c2_refined = measure_c2(*refined, params.p);
    rep.refinement_change = std::abs(rep.c2_refined / rep.c2 - 1.0);
    if (rep.refinement_change > max_change) {
      throw NumericalError("c2 changed by " + std::to_string(100.0 * rep.refinement_change) +
                           "% under refinement; quadrature is not resolving the composition");
    }
  }
  return rep;
}

}  // namespace fracsing
