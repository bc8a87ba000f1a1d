#include "fracsing/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracsing/errors.hpp"

namespace fracsing {

namespace {

void check_order(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in (0,1), got " + std::to_string(alpha));
  }
}

void check_dim(int dim) {
  if (dim < 2) {
    throw InvalidArgument("dimension must be >= 2, got " + std::to_string(dim));
  }
}

}  // namespace

ProblemParams::ProblemParams(int dim_, double alpha_, double p_, double k_)
    : dim(dim_), alpha(alpha_), p(p_), k(k_) {
  validate();
}

void ProblemParams::validate() const {
  check_dim(dim);
  check_order(alpha);
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("exponent p must be > 1, got " + std::to_string(p));
  }
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw InvalidArgument("source strength k must be >= 0, got " + std::to_string(k));
  }
}

double ProblemParams::critical_exponent() const {
  return dim / (dim - 2.0 * alpha);
}

double ProblemParams::bounded_composition_exponent() const {
  return 2.0 * alpha / (dim - 2.0 * alpha);
}

ProblemParams ProblemParams::with_k(double new_k) const {
  return ProblemParams(dim, alpha, p, new_k);
}

double fundamental_constant(int dim, double alpha) {
  check_dim(dim);
  check_order(alpha);
  const double n_half = 0.5 * dim;
  return std::tgamma(n_half - alpha) /
         (std::pow(4.0, alpha) * std::pow(std::numbers::pi, n_half) * std::tgamma(alpha));
}

double principal_value_constant(int dim, double alpha) {
  check_dim(dim);
  check_order(alpha);
  const double n_half = 0.5 * dim;
  return alpha * std::pow(4.0, alpha) * std::tgamma(n_half + alpha) /
         (std::pow(std::numbers::pi, n_half) * std::tgamma(1.0 - alpha));
}

Constants constants(int dim, double alpha) {
  return Constants{fundamental_constant(dim, alpha), principal_value_constant(dim, alpha)};
}

double torsion_constant(int dim, double alpha) {
  check_dim(dim);
  check_order(alpha);
  const double n_half = 0.5 * dim;
  return std::tgamma(n_half) /
         (std::pow(4.0, alpha) * std::tgamma(n_half + alpha) * std::tgamma(1.0 + alpha));
}

double sphere_area(int dim) {
  check_dim(dim);
  const double n_half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, n_half) / std::tgamma(n_half);
}

double ball_volume(int dim) {
  return sphere_area(dim) / dim;
}

}  // namespace fracsing
