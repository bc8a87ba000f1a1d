#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "fracsing/grid.hpp"
#include "fracsing/params.hpp"
#include "fracsing/radial_function.hpp"

namespace fracsing {

struct AssemblyOptions {
  /// Worker threads for row assembly; 0 means hardware concurrency.
  int threads = 0;
  /// Gauss order used for the singular near-field integrals.
  int near_order = 20;
};

/// Dense Nystrom discretization of f -> int_B G(x, y) f(y) dy restricted to radial f.
///
/// matrix(i, j) = K(r_i, r_j) w_j with K the sphere-averaged kernel.  The diagonal
/// carries the singularity-subtraction correction, so that
///   (M f)_i = sum_j K_ij w_j (f_j - f_i) + f_i int K(r_i, s) ds
/// in the near field.  The kernel matrix K_ij = matrix(i,j) / w_j is kept exactly
/// symmetric, which makes M self-adjoint in the weighted inner product.
class GreenOperator {
public:
  GreenOperator(GridPtr grid, int dim, double alpha, Eigen::MatrixXd matrix,
                std::vector<double> dirac_column);

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] int size() const { return static_cast<int>(matrix_.rows()); }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  /// 2 alpha - N.
  [[nodiscard]] double singular_exponent() const { return 2.0 * alpha_ - dim_; }

  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// K_ij = matrix(i, j) / w_j (symmetric).
  [[nodiscard]] const Eigen::MatrixXd& kernel_matrix() const { return kernel_; }
  /// W^{1/2} K W^{1/2}: symmetric positive definite form of the operator.
  [[nodiscard]] const Eigen::MatrixXd& symmetric_matrix() const { return symmetric_; }
  [[nodiscard]] std::span<const double> dirac_column() const { return dirac_; }
  [[nodiscard]] std::span<const double> sqrt_weights() const { return sqrt_w_; }

  /// G[f] on the grid (samples only).
  [[nodiscard]] std::vector<double> apply(std::span<const double> f) const;
  /// G[f] of the total profile of f; the result is fully sampled.
  [[nodiscard]] RadialFunction apply(const RadialFunction& f) const;

  /// g with G[g] = xi on the grid.
  [[nodiscard]] std::vector<double> solve(std::span<const double> xi) const;

  /// Operator for the ball of radius R < 1: nodes R r_i, matrix R^{2 alpha} M.
  [[nodiscard]] GreenOperator rescaled(double radius) const;

  /// True when both operators refer to the same set of nodes.
  [[nodiscard]] bool compatible(const RadialFunction& f) const;

private:
  GridPtr grid_;
  int dim_;
  double alpha_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd kernel_;
  Eigen::MatrixXd symmetric_;
  std::vector<double> dirac_;
  std::vector<double> sqrt_w_;
  std::shared_ptr<const Eigen::LLT<Eigen::MatrixXd>> factor_;
};

/// Assembles the Green operator for params.dim / params.alpha on `grid`.
/// Kernel failures are rethrown as NumericalError naming the entry (i, j).
GreenOperator assemble(const GridPtr& grid, const ProblemParams& params,
                       const AssemblyOptions& opts = {});

}  // namespace fracsing
