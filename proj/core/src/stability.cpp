#include "fracsing/stability.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "fracsing/errors.hpp"
#include "fracsing/spectral.hpp"

namespace fracsing {

namespace {

// p u^{p-1} at the nodes; zero where u <= 0.
Eigen::VectorXd linearized_weight(const RadialFunction& u, double p) {
  const auto total = u.total();
  Eigen::VectorXd q(static_cast<Eigen::Index>(total.size()));
  for (std::size_t i = 0; i < total.size(); ++i) {
    q(static_cast<Eigen::Index>(i)) = total[i] > 0.0 ? p * std::pow(total[i], p - 1.0) : 0.0;
  }
  return q;
}

void check_input(const RadialFunction& u, const ProblemParams& params, const GreenOperator& op) {
  params.validate();
  if (!op.compatible(u)) {
    throw InvalidArgument("stability: profile lives on a different grid");
  }
  if (!u.is_nonnegative(1e-12)) {
    throw InvalidArgument("stability: profile must be nonnegative");
  }
  if (!u.power_integrable(params.p - 1.0)) {
    throw InvalidArgument("stability: u^{p-1} is not integrable at the origin");
  }
}

}  // namespace

StabilityReport sigma1(const RadialFunction& u, const ProblemParams& params, const GreenOperator& op,
                       double tol, int max_iter) {
  check_input(u, params, op);
  StabilityReport rep;
  const Eigen::VectorXd q = linearized_weight(u, params.p);
  if (q.maxCoeff() <= 0.0) {
    rep.infinite = true;
    rep.sigma1 = std::numeric_limits<double>::infinity();
    rep.gap = 1.0;
    return rep;
  }
  const int n = op.size();
  Eigen::Map<const Eigen::VectorXd> w(op.grid()->weights().data(), n);
  const Eigen::VectorXd mass = w.cwiseProduct(q);
  const auto& m = op.matrix();
  auto res = power_iteration(
      [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(m * q.cwiseProduct(x)); }, mass,
      Eigen::VectorXd::Ones(n), {tol, max_iter});
  Eigen::VectorXd xi = res.vector;
  if (xi.sum() < 0.0) {
    xi = -xi;
  }
  xi /= std::sqrt((w.array() * xi.array().square()).sum());
  rep.sigma1 = 1.0 / res.eigenvalue;
  rep.gap = 1.0 - res.eigenvalue;
  rep.iterations = res.iterations;
  rep.eigfun = RadialFunction(op.grid(), std::vector<double>(xi.data(), xi.data() + n));
  return rep;
}

double sigma1_dense(const RadialFunction& u, const ProblemParams& params, const GreenOperator& op) {
  check_input(u, params, op);
  const int n = op.size();
  Eigen::Map<const Eigen::VectorXd> w(op.grid()->weights().data(), n);
  const Eigen::VectorXd sq = w.cwiseProduct(linearized_weight(u, params.p)).cwiseSqrt();
  const Eigen::MatrixXd b = sq.asDiagonal() * op.kernel_matrix() * sq.asDiagonal();
  return 1.0 / dense_dominant_eigenpair(b).first;
}

double sigma1_rayleigh(const RadialFunction& u, const ProblemParams& params,
                       const DiscreteHAlphaForm& form) {
  check_input(u, params, form.op());
  // In mass-normalized coordinates the weight p sum w u^{p-1} xi^2 becomes
  // sum q y^2; pencil (diag(q), Ahat): the largest mu is 1 / sigma1.
  const Eigen::VectorXd q = linearized_weight(u, params.p);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      Eigen::MatrixXd(q.asDiagonal()), form.normalized_stiffness(),
      Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) {
    throw NumericalError("generalized eigensolver failed for sigma1");
  }
  return 1.0 / ges.eigenvalues()(ges.eigenvalues().size() - 1);
}

StabilityScan stability_gap_scan(const ProblemParams& params, const GreenOperator& op,
                                 const KStarBracket& bracket, int n_samples,
                                 const SolveOptions& opts, double monotone_tol) {
  if (n_samples < 4) {
    throw InvalidArgument("stability scan needs at least 4 samples");
  }
  if (!(bracket.k_lo > 0.0 && bracket.k_lo < bracket.k_hi)) {
    throw InvalidArgument("invalid k* bracket");
  }
  StabilityScan scan;
  const double e = (params.p - 1.0) / params.p;
  const double kstar_e = std::pow(bracket.k_lo, e);
  RadialFunction warm;
  double sxx = 0.0;
  double sxy = 0.0;
  for (int j = 0; j < n_samples; ++j) {
    const double k = bracket.k_lo * (0.1 + 0.9 * (j + 1.0) / n_samples);
    SolveOptions o = opts;
    o.warm_start = j > 0 ? &warm : nullptr;
    auto rep = iterate_minimal(params.with_k(k), op, o);
    if (rep.status != SolveStatus::Converged) {
      throw NumericalError("minimal iteration failed at k = " + std::to_string(k) +
                           " inside the bracket");
    }
    const auto st = sigma1(rep.profile, params.with_k(k), op);
    StabilitySample s{k, st.sigma1, st.gap, kstar_e - std::pow(k, e)};
    if (!scan.samples.empty() &&
        s.sigma1 > scan.samples.back().sigma1 * (1.0 + monotone_tol)) {
      scan.nonincreasing = false;
      throw NumericalError("sigma1 increased from " + std::to_string(scan.samples.back().sigma1) +
                           " to " + std::to_string(s.sigma1) + " at k = " + std::to_string(k));
    }
    sxx += s.distance * s.distance;
    sxy += s.distance * s.gap;
    scan.samples.push_back(s);
    warm = std::move(rep.profile);
  }
  scan.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return scan;
}

}  // namespace fracsing
