#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracsing/green_operator.hpp"

namespace fracsing {

/// Discrete H^alpha_0 form ||v||^2_alpha ~ v^T A v with A = (G / W)^{-1}, the inverse of the
/// symmetric kernel matrix.  Evaluations go through the operator's Cholesky factor;
/// `stiffness()` is the explicit (symmetrized) matrix.
class DiscreteHAlphaForm {
public:
  explicit DiscreteHAlphaForm(const GreenOperator& op, double condition_cap = 1e12);

  [[nodiscard]] const GreenOperator& op() const { return *op_; }
  [[nodiscard]] const Eigen::MatrixXd& stiffness() const { return stiffness_; }
  /// W^{-1/2} A W^{-1/2}: the same form in mass-normalized coordinates y = W^{1/2} v.
  /// The raw stiffness inherits the spread of the quadrature weights; quotients are
  /// evaluated in these coordinates instead.
  [[nodiscard]] const Eigen::MatrixXd& normalized_stiffness() const { return normalized_; }
  [[nodiscard]] std::span<const double> mass() const { return op_->grid()->weights(); }
  [[nodiscard]] double condition_number() const { return condition_; }

  /// v^T A v.
  [[nodiscard]] double quadratic(std::span<const double> v) const;
  /// u^T A v.
  [[nodiscard]] double bilinear(std::span<const double> u, std::span<const double> v) const;
  /// A v.
  [[nodiscard]] std::vector<double> apply(std::span<const double> v) const;

  /// min over v of v^T A v / sum_i w_i v_i^2 (dense generalized eigensolve).
  [[nodiscard]] double min_rayleigh_quotient() const;

  /// max over test profiles f of ||A G[f] - W f|| / ||W f|| (should be ~ rounding).
  [[nodiscard]] double inverse_consistency(const std::vector<std::vector<double>>& profiles) const;

private:
  const GreenOperator* op_;
  Eigen::MatrixXd stiffness_;
  Eigen::MatrixXd normalized_;
  double condition_ = 0.0;
};

DiscreteHAlphaForm build_form(const GreenOperator& op, double condition_cap = 1e12);

}  // namespace fracsing
