#pragma once

namespace fracsing {

/// Parameters of (-Delta)^alpha u = u^p + k delta_0 on the unit ball of R^dim.
struct ProblemParams {
  int dim = 2;
  double alpha = 0.75;
  double p = 2.0;
  double k = 0.0;

  ProblemParams() = default;
  ProblemParams(int dim, double alpha, double p, double k);

  /// Throws InvalidArgument unless dim >= 2, 0 < alpha < 1, p > 1, k >= 0.
  void validate() const;

  /// N / (N - 2 alpha): singular (k > 0) solutions exist only below this.
  [[nodiscard]] double critical_exponent() const;
  [[nodiscard]] bool subcritical() const { return p < critical_exponent(); }

  /// 2 alpha - N, the power carried by the fundamental solution.
  [[nodiscard]] double singular_exponent() const { return 2.0 * alpha - dim; }

  /// 2 alpha / (N - 2 alpha): below it the composed profile stays bounded at 0.
  [[nodiscard]] double bounded_composition_exponent() const;

  [[nodiscard]] ProblemParams with_k(double new_k) const;
};

/// Normalization constants of the fractional Laplacian in R^dim.
struct Constants {
  /// Gamma_0(x) = c_fund |x|^{2 alpha - N} solves (-Delta)^alpha Gamma_0 = delta_0.
  double c_fund = 0.0;
  /// Prefactor of the principal-value integral defining (-Delta)^alpha.
  double c_pv = 0.0;
};

/// Gamma(N/2 - alpha) / (4^alpha pi^{N/2} Gamma(alpha)).
double fundamental_constant(int dim, double alpha);

/// alpha 4^alpha Gamma(N/2 + alpha) / (pi^{N/2} Gamma(1 - alpha)).
double principal_value_constant(int dim, double alpha);

Constants constants(int dim, double alpha);

/// Coefficient c of the torsion function c (1 - |x|^2)^alpha, the solution of
/// (-Delta)^alpha u = 1 in the ball with zero exterior data.
double torsion_constant(int dim, double alpha);

/// |S^{N-1}|.
double sphere_area(int dim);

/// |B_1| in R^dim.
double ball_volume(int dim);

}  // namespace fracsing
