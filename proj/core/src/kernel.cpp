#include "fracsing/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "fracsing/errors.hpp"
#include "fracsing/quadrature.hpp"

namespace fracsing {

namespace {

constexpr double kPi = std::numbers::pi;

template <std::size_t N, class F>
std::array<double, N> chebyshev_fit(F&& f) {
  std::array<double, N> samples{};
  for (std::size_t k = 0; k < N; ++k) {
    const double x = std::cos(kPi * (static_cast<double>(k) + 0.5) / N);
    samples[k] = f(0.25 * (x + 1.0));
  }
  std::array<double, N> coeffs{};
  for (std::size_t j = 0; j < N; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      sum += samples[k] * std::cos(kPi * static_cast<double>(j) * (static_cast<double>(k) + 0.5) / N);
    }
    coeffs[j] = 2.0 * sum / N;
  }
  coeffs[0] *= 0.5;
  return coeffs;
}

template <std::size_t N>
double clenshaw(const std::array<double, N>& c, double z) {
  const double x = 4.0 * z - 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t j = N - 1; j > 0; --j) {
    const double b0 = 2.0 * x * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

double norm_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    s += v * v;
  }
  return s;
}

}  // namespace

IncompleteBeta::IncompleteBeta(double a, double b) : a_(a), b_(b) {
  lo_ = chebyshev_fit<kDegree>([&](double z) {
    return boost::math::ibeta(a_, b_, z) / std::pow(z, a_);
  });
  hi_ = chebyshev_fit<kDegree>([&](double y) {
    return boost::math::ibeta(b_, a_, y) / std::pow(y, b_);
  });
}

double IncompleteBeta::operator()(double z, double one_minus_z) const {
  if (z <= 0.0) {
    return 0.0;
  }
  if (one_minus_z <= 0.0) {
    return 1.0;
  }
  if (z <= 0.5) {
    return std::pow(z, a_) * clenshaw(lo_, z);
  }
  return 1.0 - std::pow(one_minus_z, b_) * clenshaw(hi_, one_minus_z);
}

BallGreenKernel::BallGreenKernel(int dim, double alpha)
    : dim_(dim),
      alpha_(alpha),
      c_fund_(fundamental_constant(dim, alpha)),
      half_exponent_(alpha - 0.5 * dim),
      angular_norm_(std::tgamma(0.5 * dim) / (std::sqrt(kPi) * std::tgamma(0.5 * (dim - 1)))),
      area_(sphere_area(dim)),
      beta_(alpha, 0.5 * dim - alpha) {}

double BallGreenKernel::from_invariants(double dist_sq, double boundary_product) const {
  if (boundary_product <= 0.0) {
    return 0.0;
  }
  const double denom = boundary_product + dist_sq;
  const double z = boundary_product / denom;
  const double zc = dist_sq / denom;
  return c_fund_ * std::pow(dist_sq, half_exponent_) * beta_(z, zc);
}

double BallGreenKernel::from_invariants_reference(double dist_sq, double boundary_product) const {
  if (boundary_product <= 0.0) {
    return 0.0;
  }
  const double denom = boundary_product + dist_sq;
  const double z = boundary_product / denom;
  const double zc = dist_sq / denom;
  const double a = alpha_;
  const double b = 0.5 * dim_ - alpha_;
  const double inc = z <= 0.5 ? boost::math::ibeta(a, b, z) : boost::math::ibetac(b, a, zc);
  return c_fund_ * std::pow(dist_sq, half_exponent_) * inc;
}

double BallGreenKernel::point(std::span<const double> x, std::span<const double> y) const {
  if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_) {
    throw InvalidArgument("point_kernel: points must have the kernel's dimension");
  }
  const double xx = norm_sq(x);
  const double yy = norm_sq(y);
  if (!(xx < 1.0) || !(yy < 1.0)) {
    throw InvalidArgument("point_kernel: points must lie in the open unit ball");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d2 += (x[i] - y[i]) * (x[i] - y[i]);
  }
  if (d2 == 0.0) {
    throw InvalidArgument("point_kernel: coincident points");
  }
  return from_invariants(d2, (1.0 - xx) * (1.0 - yy));
}

double BallGreenKernel::dirac(double r) const {
  return from_invariants(r * r, 1.0 - r * r);
}

double BallGreenKernel::angular_integrand(double r, double s, double gap, double boundary_product,
                                          double theta) const {
  const double h = std::sin(0.5 * theta);
  const double d2 = gap * gap + 4.0 * r * s * h * h;
  double weight = 1.0;
  if (dim_ > 2) {
    weight = std::pow(std::sin(theta), dim_ - 2);
  }
  return from_invariants(d2, boundary_product) * weight;
}

// int_0^{theta0} of the r == s integrand, which behaves like theta^{2 alpha - 2}.
// With theta = theta0 u^m and m = 1/(2 alpha - 1) the mapped integrand is bounded.
double BallGreenKernel::diagonal_head(double r, double boundary_product, double theta0) const {
  const double m = 1.0 / (2.0 * alpha_ - 1.0);
  const auto& rule = gauss_legendre(20);
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const double u = 0.5 * (rule.nodes[static_cast<std::size_t>(q)] + 1.0);
    const double w = 0.5 * rule.weights[static_cast<std::size_t>(q)];
    const double um1 = std::pow(u, m - 1.0);
    const double theta = theta0 * um1 * u;
    sum += w * angular_integrand(r, r, 0.0, boundary_product, theta) * theta0 * m * um1;
  }
  return sum;
}

double BallGreenKernel::sphere_mean(double r, double s) const {
  if (!(r >= 0.0 && r < 1.0 && s >= 0.0 && s < 1.0)) {
    throw InvalidArgument("sphere_mean: radii must lie in [0,1)");
  }
  return mean(r, s, s - r);
}

double BallGreenKernel::sphere_mean_offset(double r, double offset) const {
  const double s = r + offset;
  if (!(r >= 0.0 && r < 1.0 && s >= 0.0 && s < 1.0)) {
    throw InvalidArgument("sphere_mean: radii must lie in [0,1)");
  }
  return mean(r, s, offset);
}

double BallGreenKernel::mean(double r, double s, double gap) const {
  const double boundary_product = (1.0 - r * r) * (1.0 - s * s);
  if (r == 0.0 || s == 0.0) {
    const double m = std::max(r, s);
    if (m == 0.0) {
      throw InvalidArgument("sphere_mean: coincident points at the origin");
    }
    return from_invariants(m * m, boundary_product);
  }
  const bool diagonal = (gap == 0.0);
  if (diagonal && alpha_ <= 0.5) {
    throw InvalidArgument("sphere_mean: r == s is singular for alpha <= 1/2; use the grid "
                          "operator's singularity-corrected diagonal");
  }

  const auto& rule = gauss_legendre(10);
  auto gauss = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      sum += rule.weights[static_cast<std::size_t>(q)] *
             angular_integrand(r, s, gap, boundary_product, mid + half * rule.nodes[static_cast<std::size_t>(q)]);
    }
    return half * sum;
  };

  const double rho = std::sqrt(r * s);
  const double scale = diagonal ? std::sqrt(boundary_product)
                                : std::min(std::abs(gap), std::sqrt(boundary_product));
  double theta0 = std::min(0.5 * scale / rho, 0.25 * kPi);

  double total = 0.0;
  double lo = 0.0;
  if (diagonal) {
    const double head = theta0 * std::ldexp(1.0, -40);
    total += diagonal_head(r, boundary_product, head);
    lo = head;
  } else {
    total += gauss(0.0, theta0);
    lo = theta0;
  }
  double hi = 2.0 * lo;
  while (lo < kPi) {
    if (hi > kPi || kPi - hi < 0.25 * (hi - lo)) {
      hi = kPi;
    }
    total += gauss(lo, hi);
    lo = hi;
    hi = 2.0 * lo;
  }
  return angular_norm_ * total;
}

double BallGreenKernel::radial(double r, double s) const {
  return area_ * sphere_mean(r, s);
}

double point_kernel(std::span<const double> x, std::span<const double> y,
                    const ProblemParams& params) {
  params.validate();
  return BallGreenKernel(params.dim, params.alpha).point(x, y);
}

double radial_kernel(double r, double s, const ProblemParams& params) {
  params.validate();
  if (!(r > 0.0 && r < 1.0 && s > 0.0 && s < 1.0)) {
    throw InvalidArgument("radial_kernel: radii must lie in (0,1)");
  }
  return BallGreenKernel(params.dim, params.alpha).radial(r, s);
}

}  // namespace fracsing
