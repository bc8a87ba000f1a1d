#pragma once

#include <span>
#include <string>
#include <vector>

#include "fracsing/green_operator.hpp"
#include "fracsing/params.hpp"
#include "fracsing/radial_function.hpp"

namespace fracsing {

/// Smooth radial test function xi with compact support in [r_inner, r_outer] (r_outer < 1),
/// together with (-Delta)^alpha xi on the grid, obtained by solving G[g] = xi.
struct TestFunction {
  std::string name;
  GridPtr grid;
  std::vector<double> values;
  double value_at_origin = 0.0;
  std::vector<double> laplacian_alpha;
  double r_inner = 0.0;
  double r_outer = 0.0;
  /// max_i |G[g]_i - xi_i|.
  double representation_error = 0.0;
};

/// Smooth step: 0 for x <= 0, 1 for x >= 1, C-infinity in between.
double smooth_step(double x);

/// xi = 1 on [0, R/2], decreasing smoothly to 0 at R.
TestFunction plateau_bump(const GreenOperator& op, double radius);
/// xi supported in [inner, outer], vanishing near the origin.
TestFunction annulus_bump(const GreenOperator& op, double inner, double outer);

/// Central bumps with supports [0, 0.2], [0, 0.35], [0, 0.5].
std::vector<TestFunction> standard_battery(const GreenOperator& op);
/// Annulus bump supported in [0.3, 0.8] (locality test).
TestFunction locality_test_function(const GreenOperator& op);

/// L(xi) = int u (-Delta)^alpha xi - int u^p xi.  Throws InvalidRegime when u^p is not
/// integrable at the origin.
double pairing(const RadialFunction& u, const TestFunction& xi, const ProblemParams& params,
               const GreenOperator& op);
/// L(xi) = int u (-Delta)^alpha xi - int source xi, for an explicit right-hand side.
double pairing(const RadialFunction& u, const TestFunction& xi, std::span<const double> source,
               const GreenOperator& op);

struct KEstimate {
  double k = 0.0;
  /// (max - min) / |mean| of L(xi)/xi(0) over the battery.
  double spread = 0.0;
  std::vector<double> per_test;
};

/// Mean of L(xi)/xi(0) over the standard battery.  Throws NumericalError if the
/// relative spread exceeds `max_spread` while the mean is above `abs_floor`.
KEstimate estimate_k(const RadialFunction& u, const ProblemParams& params, const GreenOperator& op,
                     double max_spread = 0.1, double abs_floor = 1e-6);
KEstimate estimate_k(const RadialFunction& u, std::span<const double> source,
                     const GreenOperator& op, double max_spread = 0.1, double abs_floor = 1e-6);

enum class Verdict { DiracSingularity, Removable, Supercritical, Inconclusive };

const char* to_string(Verdict verdict);

struct ClassificationReport {
  double k_estimate = 0.0;
  double k_spread = 0.0;
  /// Log-log slope of u on the innermost decade (excluding the 3 smallest nodes).
  double exponent_fit = 0.0;
  /// u r^{N-2 alpha} / (c_fund k_estimate) extrapolated to r -> 0.
  double limit_ratio = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  bool supercritical = false;
  double fit_r_lo = 0.0;
  double fit_r_hi = 0.0;
};

/// Asymptotic verdict from the profile and a given mass estimate.
ClassificationReport asymptotic_fit(const RadialFunction& u, const ProblemParams& params,
                                    double k_estimate);

/// estimate_k followed by asymptotic_fit.
ClassificationReport classify(const RadialFunction& u, const ProblemParams& params,
                              const GreenOperator& op);

struct IntegrabilityReport {
  /// u^p integrable at the origin judged from the explicit singular part.
  bool integrable = false;
  /// sum_i w_i u_i^p on the grid (infinite when not integrable).
  double quadrature = 0.0;
};

IntegrabilityReport lp_integrability(const RadialFunction& u, double p);

}  // namespace fracsing
