#include "fracsing/spectral.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "fracsing/errors.hpp"

namespace fracsing {

namespace {

double mass_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& mass) {
  return std::sqrt((mass.array() * x.array().square()).sum());
}

}  // namespace

PowerIterationResult power_iteration(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                                     const Eigen::VectorXd& mass, Eigen::VectorXd start,
                                     const PowerIterationOptions& opts) {
  PowerIterationResult out;
  double norm = mass_norm(start, mass);
  if (!(norm > 0.0)) {
    throw NumericalError("power iteration: start vector has zero norm");
  }
  Eigen::VectorXd x = start / norm;
  for (int it = 1; it <= opts.max_iter; ++it) {
    Eigen::VectorXd y = apply(x);
    const double lambda = (mass.array() * x.array() * y.array()).sum();
    if (!std::isfinite(lambda) || lambda == 0.0) {
      throw NumericalError("power iteration: degenerate Rayleigh quotient");
    }
    const double residual = mass_norm(y - lambda * x, mass) / std::abs(lambda);
    norm = mass_norm(y, mass);
    x = y / norm;
    out.eigenvalue = lambda;
    out.iterations = it;
    out.residual = residual;
    if (residual <= opts.tol) {
      out.vector = x;
      // Final Rayleigh quotient on the updated vector.
      const Eigen::VectorXd tx = apply(x);
      out.eigenvalue = (mass.array() * x.array() * tx.array()).sum();
      return out;
    }
  }
  throw NumericalError("power iteration did not converge in " + std::to_string(opts.max_iter) +
                       " iterations (residual " + std::to_string(out.residual) + ")");
}

std::pair<double, Eigen::VectorXd> dense_dominant_eigenpair(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense symmetric eigensolver failed");
  }
  const auto n = symmetric.rows();
  return {solver.eigenvalues()(n - 1), solver.eigenvectors().col(n - 1)};
}

}  // namespace fracsing
