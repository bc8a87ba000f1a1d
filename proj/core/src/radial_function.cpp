#include "fracsing/radial_function.hpp"

#include <algorithm>
#include <cmath>

#include "fracsing/errors.hpp"

namespace fracsing {

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values, double singular_coeff,
                               double singular_exponent)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      singular_coeff_(singular_coeff),
      singular_exponent_(singular_exponent) {
  if (!grid_) {
    throw InvalidArgument("radial function needs a grid");
  }
  if (static_cast<int>(values_.size()) != grid_->size()) {
    throw InvalidArgument("radial function sample count does not match its grid");
  }
}

RadialFunction RadialFunction::zero(GridPtr grid, double singular_exponent) {
  const auto n = static_cast<std::size_t>(grid->size());
  return RadialFunction(std::move(grid), std::vector<double>(n, 0.0), 0.0, singular_exponent);
}

RadialFunction RadialFunction::pure_singular(GridPtr grid, double coeff, double exponent) {
  const auto n = static_cast<std::size_t>(grid->size());
  return RadialFunction(std::move(grid), std::vector<double>(n, 0.0), coeff, exponent);
}

RadialFunction RadialFunction::from_total(GridPtr grid, std::span<const double> total) {
  return RadialFunction(std::move(grid), std::vector<double>(total.begin(), total.end()));
}

double RadialFunction::singular_part(int i) const {
  if (singular_coeff_ == 0.0) {
    return 0.0;
  }
  return singular_coeff_ * std::pow(grid_->node(i), singular_exponent_);
}

double RadialFunction::total(int i) const {
  return values_[static_cast<std::size_t>(i)] + singular_part(i);
}

std::vector<double> RadialFunction::total() const {
  std::vector<double> out(values_.size());
  for (int i = 0; i < size(); ++i) {
    out[static_cast<std::size_t>(i)] = total(i);
  }
  return out;
}

bool RadialFunction::is_nonnegative(double slack) const {
  for (int i = 0; i < size(); ++i) {
    if (total(i) < -slack) {
      return false;
    }
  }
  return true;
}

bool RadialFunction::is_zero() const {
  return singular_coeff_ == 0.0 &&
         std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

RadialFunction RadialFunction::pow(double power) const {
  std::vector<double> out(values_.size());
  for (int i = 0; i < size(); ++i) {
    const double t = total(i);
    out[static_cast<std::size_t>(i)] = t > 0.0 ? std::pow(t, power) : 0.0;
  }
  return RadialFunction(grid_, std::move(out));
}

RadialFunction RadialFunction::scaled(double factor) const {
  std::vector<double> out(values_);
  for (auto& v : out) {
    v *= factor;
  }
  return RadialFunction(grid_, std::move(out), factor * singular_coeff_, singular_exponent_);
}

bool RadialFunction::power_integrable(double power) const {
  if (singular_coeff_ == 0.0 || singular_exponent_ >= 0.0) {
    return true;
  }
  return power * singular_exponent_ + grid_->dim() > 0.0;
}

RadialFunction RadialFunction::flattened() const {
  return RadialFunction(grid_, total(), 0.0, singular_exponent_);
}

namespace {

void check_compatible(const RadialFunction& a, const RadialFunction& b) {
  if (a.grid() != b.grid() && (a.grid()->size() != b.grid()->size() ||
                               !std::equal(a.grid()->nodes().begin(), a.grid()->nodes().end(),
                                           b.grid()->nodes().begin()))) {
    throw InvalidArgument("radial functions live on different grids");
  }
}

RadialFunction combine(const RadialFunction& a, const RadialFunction& b, double sign) {
  check_compatible(a, b);
  std::vector<double> values(a.values().begin(), a.values().end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] += sign * b.values()[i];
  }
  if (a.singular_coeff() == 0.0 || b.singular_coeff() == 0.0 ||
      a.singular_exponent() == b.singular_exponent()) {
    const double exponent =
        a.singular_coeff() != 0.0 ? a.singular_exponent() : b.singular_exponent();
    return RadialFunction(a.grid(), std::move(values),
                          a.singular_coeff() + sign * b.singular_coeff(), exponent);
  }
  // Different singular powers: keep a's symbolically, sample b's.
  for (int i = 0; i < a.size(); ++i) {
    values[static_cast<std::size_t>(i)] += sign * b.singular_part(i);
  }
  return RadialFunction(a.grid(), std::move(values), a.singular_coeff(), a.singular_exponent());
}

}  // namespace

RadialFunction operator+(const RadialFunction& a, const RadialFunction& b) {
  return combine(a, b, 1.0);
}

RadialFunction operator-(const RadialFunction& a, const RadialFunction& b) {
  return combine(a, b, -1.0);
}

}  // namespace fracsing
