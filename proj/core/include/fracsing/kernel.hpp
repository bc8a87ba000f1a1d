#pragma once

#include <array>
#include <span>

#include "fracsing/params.hpp"

namespace fracsing {

/// Regularized incomplete Beta function I_z(a, b) for fixed (a, b).
///
/// Split at z = 1/2 into z^a S_lo(z) and 1 - (1-z)^b S_hi(1-z); both S are
/// analytic on [0, 1/2] and stored as Chebyshev interpolants built from
/// Boost.Math reference values, so evaluation costs one pow and a Clenshaw sum.
class IncompleteBeta {
public:
  IncompleteBeta(double a, double b);

  /// I_z(a,b) given z and its complement 1 - z (both passed to avoid cancellation).
  [[nodiscard]] double operator()(double z, double one_minus_z) const;

  static constexpr int kDegree = 28;

private:
  double a_;
  double b_;
  std::array<double, kDegree> lo_{};
  std::array<double, kDegree> hi_{};
};

/// Green function of (-Delta)^alpha on the unit ball with zero exterior data:
///   G(x,y) = c_fund |x-y|^{2 alpha - N} I_z(alpha, N/2 - alpha),
///   z = A / (A + |x-y|^2),  A = (1 - |x|^2)(1 - |y|^2),
/// which is kappa |x-y|^{2 alpha - N} int_0^{A/|x-y|^2} t^{alpha-1} (1+t)^{-N/2} dt
/// written in incomplete-Beta form.
class BallGreenKernel {
public:
  BallGreenKernel(int dim, double alpha);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double c_fund() const { return c_fund_; }

  /// G as a function of |x-y|^2 and A = (1-|x|^2)(1-|y|^2).
  [[nodiscard]] double from_invariants(double dist_sq, double boundary_product) const;
  /// Same, evaluating the incomplete Beta directly through Boost (reference path).
  [[nodiscard]] double from_invariants_reference(double dist_sq, double boundary_product) const;

  /// G(x, y) for points of the open ball; throws on x == y or points outside.
  [[nodiscard]] double point(std::span<const double> x, std::span<const double> y) const;

  /// G(r e_1, 0).
  [[nodiscard]] double dirac(double r) const;

  /// Mean of G(r e_1, s w) over w in S^{N-1}.  For r == s the mean is finite only
  /// when alpha > 1/2; otherwise InvalidArgument is thrown.
  [[nodiscard]] double sphere_mean(double r, double s) const;
  /// sphere_mean(r, r + offset) with the radial gap passed exactly, for offsets
  /// far below the spacing of doubles near r.  A zero offset is the diagonal.
  [[nodiscard]] double sphere_mean_offset(double r, double offset) const;

  /// int_{S^{N-1}} G(r e_1, s w) dw = |S^{N-1}| * sphere_mean(r, s).
  [[nodiscard]] double radial(double r, double s) const;

private:
  [[nodiscard]] double angular_integrand(double r, double s, double gap, double boundary_product,
                                         double theta) const;
  [[nodiscard]] double mean(double r, double s, double gap) const;
  [[nodiscard]] double diagonal_head(double r, double boundary_product, double theta0) const;

  int dim_;
  double alpha_;
  double c_fund_;
  double half_exponent_;  // (2 alpha - N) / 2
  double angular_norm_;   // |S^{N-2}| / |S^{N-1}|
  double area_;
  IncompleteBeta beta_;
};

/// G(x, y) on the unit ball for params.dim / params.alpha.
double point_kernel(std::span<const double> x, std::span<const double> y,
                    const ProblemParams& params);

/// K(r, s) = int_{|w|=1} G(r e_1, s w) dw, so G[f](r) = int_0^1 K(r,s) f(s) s^{N-1} ds.
double radial_kernel(double r, double s, const ProblemParams& params);

}  // namespace fracsing
