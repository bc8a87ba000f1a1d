#pragma once

#include <functional>

#include <Eigen/Dense>

namespace fracsing {

struct PowerIterationResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd vector;  // unit norm in the mass inner product
  int iterations = 0;
  double residual = 0.0;   // ||T x - lambda x||_mass / |lambda|
};

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 20000;
};

/// Dominant eigenpair of T, assumed self-adjoint and positivity preserving in the
/// inner product <x, y> = sum_i mass_i x_i y_i.  The eigenvalue is taken as the
/// Rayleigh quotient, whose error is quadratic in the eigenvector error.
/// Throws NumericalError past the iteration cap.
PowerIterationResult power_iteration(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                                     const Eigen::VectorXd& mass, Eigen::VectorXd start,
                                     const PowerIterationOptions& opts = {});

/// Largest eigenvalue of a dense symmetric matrix (and its eigenvector).
std::pair<double, Eigen::VectorXd> dense_dominant_eigenpair(const Eigen::MatrixXd& symmetric);

}  // namespace fracsing
