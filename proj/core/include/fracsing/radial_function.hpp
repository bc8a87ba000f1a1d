#pragma once

#include <span>
#include <vector>

#include "fracsing/grid.hpp"

namespace fracsing {

/// Radial profile sampled on a grid, split as
///   u(r_i) = values[i] + singular_coeff * r_i^{singular_exponent}.
///
/// The singular part is carried symbolically so that the r^{2 alpha - N}
/// behaviour of Dirac-sourced profiles is never mistaken for sampled data.
/// Arithmetic acts on the total profile; sums of pure singular parts stay exact.
class RadialFunction {
public:
  RadialFunction() = default;
  RadialFunction(GridPtr grid, std::vector<double> values, double singular_coeff = 0.0,
                 double singular_exponent = 0.0);

  static RadialFunction zero(GridPtr grid, double singular_exponent = 0.0);
  /// a * r^{exponent} with no sampled part.
  static RadialFunction pure_singular(GridPtr grid, double coeff, double exponent);
  static RadialFunction from_total(GridPtr grid, std::span<const double> total);

  [[nodiscard]] const GridPtr& grid() const { return grid_; }
  [[nodiscard]] int size() const { return static_cast<int>(values_.size()); }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double singular_coeff() const { return singular_coeff_; }
  [[nodiscard]] double singular_exponent() const { return singular_exponent_; }

  [[nodiscard]] double singular_part(int i) const;
  [[nodiscard]] double total(int i) const;
  [[nodiscard]] std::vector<double> total() const;

  [[nodiscard]] bool is_nonnegative(double slack = 0.0) const;
  [[nodiscard]] bool is_zero() const;

  /// Pointwise total^power; the result is fully sampled.
  [[nodiscard]] RadialFunction pow(double power) const;
  [[nodiscard]] RadialFunction scaled(double factor) const;

  /// Whether total^power is integrable at the origin against r^{N-1} dr,
  /// judged from the symbolic singular part.
  [[nodiscard]] bool power_integrable(double power) const;

  /// Same profile with the singular part expanded into the samples.
  [[nodiscard]] RadialFunction flattened() const;

  friend RadialFunction operator+(const RadialFunction& a, const RadialFunction& b);
  friend RadialFunction operator-(const RadialFunction& a, const RadialFunction& b);

private:
  GridPtr grid_;
  std::vector<double> values_;
  double singular_coeff_ = 0.0;
  double singular_exponent_ = 0.0;
};

}  // namespace fracsing
