#include "fracsing/halpha_form.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "fracsing/errors.hpp"

namespace fracsing {

DiscreteHAlphaForm::DiscreteHAlphaForm(const GreenOperator& op, double condition_cap) : op_(&op) {
  const Eigen::MatrixXd& g = op.symmetric_matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed while checking the Green matrix");
  }
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(g.rows() - 1);
  condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition_ <= condition_cap)) {
    throw NumericalError("Green matrix condition number " + std::to_string(condition_) +
                         " exceeds the cap " + std::to_string(condition_cap) +
                         "; the grid is too aggressive for an explicit H^alpha form");
  }
  // A = W^{1/2} Ghat^{-1} W^{1/2}.
  const int n = op.size();
  Eigen::Map<const Eigen::VectorXd> sw(op.sqrt_weights().data(), n);
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  normalized_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
  normalized_ = (0.5 * (normalized_ + normalized_.transpose())).eval();
  stiffness_ = sw.asDiagonal() * normalized_ * sw.asDiagonal();
  stiffness_ = (0.5 * (stiffness_ + stiffness_.transpose())).eval();
}

std::vector<double> DiscreteHAlphaForm::apply(std::span<const double> v) const {
  // A v = W (M^{-1} v).
  auto g = op_->solve(v);
  const auto w = mass();
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] *= w[i];
  }
  return g;
}

double DiscreteHAlphaForm::bilinear(std::span<const double> u, std::span<const double> v) const {
  const auto av = apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    s += u[i] * av[i];
  }
  return s;
}

double DiscreteHAlphaForm::quadratic(std::span<const double> v) const {
  return bilinear(v, v);
}

double DiscreteHAlphaForm::min_rayleigh_quotient() const {
  // With y = W^{1/2} v the quotient is y^T Ahat y / y^T y.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normalized_, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed on the H^alpha form");
  }
  return eig.eigenvalues()(0);
}

double DiscreteHAlphaForm::inverse_consistency(const std::vector<std::vector<double>>& profiles) const {
  const int n = op_->size();
  Eigen::Map<const Eigen::VectorXd> w(mass().data(), n);
  double worst = 0.0;
  for (const auto& f : profiles) {
    Eigen::Map<const Eigen::VectorXd> fv(f.data(), n);
    const Eigen::VectorXd wf = w.cwiseProduct(fv);
    const Eigen::VectorXd agf = stiffness_ * (op_->matrix() * fv);
    worst = std::max(worst, (agf - wf).norm() / wf.norm());
  }
  return worst;
}

DiscreteHAlphaForm build_form(const GreenOperator& op, double condition_cap) {
  return DiscreteHAlphaForm(op, condition_cap);
}

}  // namespace fracsing
