#include "fracsing/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fracsing/compose.hpp"
#include "fracsing/errors.hpp"

namespace fracsing {

namespace {

double h_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

TestFunction finish(const GreenOperator& op, std::string name, std::vector<double> values,
                    double at_origin, double inner, double outer) {
  TestFunction xi;
  xi.name = std::move(name);
  xi.grid = op.grid();
  xi.value_at_origin = at_origin;
  xi.r_inner = inner;
  xi.r_outer = outer;
  xi.laplacian_alpha = op.solve(values);
  const auto back = op.apply(xi.laplacian_alpha);
  for (std::size_t i = 0; i < values.size(); ++i) {
    xi.representation_error = std::max(xi.representation_error, std::abs(back[i] - values[i]));
  }
  xi.values = std::move(values);
  return xi;
}

double pow_pos(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }

}  // namespace

double smooth_step(double x) {
  const double a = h_exp(x);
  const double b = h_exp(1.0 - x);
  return a / (a + b);
}

TestFunction plateau_bump(const GreenOperator& op, double radius) {
  if (!(radius > 0.0 && radius < 1.0)) {
    throw InvalidArgument("plateau bump radius must lie in (0,1)");
  }
  const auto nodes = op.grid()->nodes();
  std::vector<double> v(nodes.size());
  const double half = 0.5 * radius;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    v[i] = smooth_step((radius - nodes[i]) / half);
  }
  return finish(op, "central[0," + std::to_string(radius).substr(0, 4) + "]", std::move(v), 1.0,
                0.0, radius);
}

TestFunction annulus_bump(const GreenOperator& op, double inner, double outer) {
  if (!(inner > 0.0 && inner < outer && outer < 1.0)) {
    throw InvalidArgument("annulus bump needs 0 < inner < outer < 1");
  }
  const auto nodes = op.grid()->nodes();
  std::vector<double> v(nodes.size());
  const double ramp = 0.5 * (outer - inner);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    v[i] = smooth_step((nodes[i] - inner) / ramp) * smooth_step((outer - nodes[i]) / ramp);
  }
  return finish(op,
                "annulus[" + std::to_string(inner).substr(0, 4) + "," +
                    std::to_string(outer).substr(0, 4) + "]",
                std::move(v), 0.0, inner, outer);
}

std::vector<TestFunction> standard_battery(const GreenOperator& op) {
  return {plateau_bump(op, 0.2), plateau_bump(op, 0.35), plateau_bump(op, 0.5)};
}

TestFunction locality_test_function(const GreenOperator& op) {
  return annulus_bump(op, 0.3, 0.8);
}

double pairing(const RadialFunction& u, const TestFunction& xi, std::span<const double> source,
               const GreenOperator& op) {
  if (!op.compatible(u) || xi.grid->size() != op.size()) {
    throw InvalidArgument("pairing: grids do not match");
  }
  const auto total = u.total();
  const auto& grid = *op.grid();
  return grid.inner(total, xi.laplacian_alpha) - grid.inner(source, xi.values);
}

double pairing(const RadialFunction& u, const TestFunction& xi, const ProblemParams& params,
               const GreenOperator& op) {
  if (!u.power_integrable(params.p)) {
    throw InvalidRegime("pairing: u^p is not integrable at the origin (p >= N/(N-2 alpha) with"
                        " a Dirac-type singular part)");
  }
  const auto total = u.total();
  std::vector<double> up(total.size());
  for (std::size_t i = 0; i < total.size(); ++i) {
    up[i] = pow_pos(total[i], params.p);
  }
  return pairing(u, xi, up, op);
}

namespace {

KEstimate summarize(std::vector<double> per_test, double max_spread, double abs_floor) {
  KEstimate est;
  est.per_test = std::move(per_test);
  est.k = std::accumulate(est.per_test.begin(), est.per_test.end(), 0.0) /
          static_cast<double>(est.per_test.size());
  const auto [lo, hi] = std::minmax_element(est.per_test.begin(), est.per_test.end());
  est.spread = std::abs(est.k) > 0.0 ? (*hi - *lo) / std::abs(est.k) : 0.0;
  if (est.spread > max_spread && std::abs(est.k) > abs_floor) {
    throw NumericalError("mass estimates disagree across test functions (spread " +
                         std::to_string(100.0 * est.spread) +
                         "%): profile is not a solution or the grid is too coarse");
  }
  return est;
}

}  // namespace

KEstimate estimate_k(const RadialFunction& u, const ProblemParams& params, const GreenOperator& op,
                     double max_spread, double abs_floor) {
  std::vector<double> per;
  for (const auto& xi : standard_battery(op)) {
    per.push_back(pairing(u, xi, params, op) / xi.value_at_origin);
  }
  return summarize(std::move(per), max_spread, abs_floor);
}

KEstimate estimate_k(const RadialFunction& u, std::span<const double> source,
                     const GreenOperator& op, double max_spread, double abs_floor) {
  std::vector<double> per;
  for (const auto& xi : standard_battery(op)) {
    per.push_back(pairing(u, xi, source, op) / xi.value_at_origin);
  }
  return summarize(std::move(per), max_spread, abs_floor);
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::DiracSingularity: return "DiracSingularity";
    case Verdict::Removable: return "Removable";
    case Verdict::Supercritical: return "Supercritical";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

ClassificationReport asymptotic_fit(const RadialFunction& u, const ProblemParams& params,
                                    double k_estimate) {
  params.validate();
  ClassificationReport rep;
  rep.k_estimate = k_estimate;
  rep.supercritical = !params.subcritical();
  const auto nodes = u.grid()->nodes();
  const auto total = u.total();
  const double beta = params.singular_exponent();

  const bool zero = std::all_of(total.begin(), total.end(), [](double v) { return v == 0.0; });
  if (zero) {
    rep.exponent_fit = 0.0;
    rep.verdict = Verdict::Removable;
    return rep;
  }
  const auto fit = innermost_decade_fit(nodes, total);
  rep.exponent_fit = fit.slope;
  rep.fit_r_lo = fit.r_lo;
  rep.fit_r_hi = fit.r_hi;

  if (k_estimate > 0.0) {
    // ratio(r) = A + B r^{N - 2 alpha}; A is the limit.
    const double c_fund = fundamental_constant(params.dim, params.alpha);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 3; i < nodes.size() && nodes[i] <= fit.r_hi; ++i) {
      const double x = std::pow(nodes[i], -beta);
      const double y = total[i] * x / (c_fund * k_estimate);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    const double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.limit_ratio = (sy - b * sx) / m;
  }

  const bool dirac = k_estimate > 0.0 && std::abs(rep.exponent_fit - beta) <= 0.05 &&
                     rep.limit_ratio >= 0.9 && rep.limit_ratio <= 1.1;
  const bool removable = rep.exponent_fit >= -0.01;
  if (removable) {
    rep.verdict = Verdict::Removable;
  } else if (rep.supercritical) {
    rep.verdict = Verdict::Supercritical;
  } else if (dirac) {
    rep.verdict = Verdict::DiracSingularity;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

ClassificationReport classify(const RadialFunction& u, const ProblemParams& params,
                              const GreenOperator& op) {
  if (!u.power_integrable(params.p)) {
    ClassificationReport rep = asymptotic_fit(u, params, 0.0);
    rep.supercritical = true;
    if (rep.verdict != Verdict::Removable) {
      rep.verdict = Verdict::Supercritical;
    }
    return rep;
  }
  const auto est = estimate_k(u, params, op);
  auto rep = asymptotic_fit(u, params, est.k);
  rep.k_spread = est.spread;
  return rep;
}

IntegrabilityReport lp_integrability(const RadialFunction& u, double p) {
  IntegrabilityReport rep;
  rep.integrable = u.power_integrable(p);
  if (!rep.integrable) {
    rep.quadrature = std::numeric_limits<double>::infinity();
    return rep;
  }
  const auto total = u.total();
  std::vector<double> up(total.size());
  for (std::size_t i = 0; i < total.size(); ++i) {
    up[i] = pow_pos(total[i], p);
  }
  rep.quadrature = u.grid()->integrate(up);
  return rep;
}

}  // namespace fracsing
