#include "fracsing/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracsing/errors.hpp"
#include "fracsing/params.hpp"
#include "fracsing/quadrature.hpp"

namespace fracsing {

namespace {

constexpr int kBaseOrder = 8;

double breakpoint(double t, double g0, double g1) {
  if (t <= 0.5) {
    return 0.5 * std::pow(2.0 * t, g0);
  }
  return 1.0 - 0.5 * std::pow(2.0 * (1.0 - t), g1);
}

}  // namespace

RadialGrid::RadialGrid(const GridSpec& spec, int dim) : spec_(spec), dim_(dim) {
  if (spec.n_nodes < 16) {
    throw InvalidArgument("grid needs at least 16 nodes, got " + std::to_string(spec.n_nodes));
  }
  if (!(spec.grading >= 1.0)) {
    throw InvalidArgument("grading must be >= 1, got " + std::to_string(spec.grading));
  }
  if (spec.boundary_grading != 0.0 && !(spec.boundary_grading >= 1.0)) {
    throw InvalidArgument("boundary grading must be >= 1, got " +
                          std::to_string(spec.boundary_grading));
  }
  const double area = sphere_area(dim);
  const double g0 = spec.grading;
  const double g1 = spec.effective_boundary_grading();
  const int n_panels = spec.n_nodes / kBaseOrder;
  const int extra = spec.n_nodes % kBaseOrder;

  nodes_.reserve(static_cast<std::size_t>(spec.n_nodes));
  for (int j = 0; j < n_panels; ++j) {
    const double lo = breakpoint(static_cast<double>(j) / n_panels, g0, g1);
    const double hi = breakpoint(static_cast<double>(j + 1) / n_panels, g0, g1);
    const int order = kBaseOrder + (j < extra ? 1 : 0);
    const auto& rule = gauss_legendre(order);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    panels_.push_back(Panel{lo, hi, size(), order});
    for (int q = 0; q < order; ++q) {
      const double r = mid + half * rule.nodes[static_cast<std::size_t>(q)];
      const double lw = half * rule.weights[static_cast<std::size_t>(q)];
      nodes_.push_back(r);
      line_weights_.push_back(lw);
      weights_.push_back(area * std::pow(r, dim - 1) * lw);
      panel_index_.push_back(j);
    }
  }
}

double RadialGrid::integrate(std::span<const double> f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    sum += weights_[i] * f[i];
  }
  return sum;
}

double RadialGrid::inner(std::span<const double> f, std::span<const double> g) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    sum += weights_[i] * f[i] * g[i];
  }
  return sum;
}

double RadialGrid::weighted_sup(std::span<const double> f, double singular_exponent) const {
  double best = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double w = std::min(1.0, std::pow(nodes_[i], -singular_exponent));
    best = std::max(best, std::abs(f[i]) * w);
  }
  return best;
}

RadialGrid RadialGrid::rescaled(double radius) const {
  if (!(radius > 0.0 && radius <= 1.0)) {
    throw InvalidArgument("rescaled grid radius must lie in (0,1]");
  }
  RadialGrid out(*this);
  const double scale_n = std::pow(radius, dim_);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    out.nodes_[i] = radius * nodes_[i];
    out.line_weights_[i] = radius * line_weights_[i];
    out.weights_[i] = scale_n * weights_[i];
  }
  for (auto& panel : out.panels_) {
    panel.lo *= radius;
    panel.hi *= radius;
  }
  return out;
}

RadialGrid make_grid(int n_nodes, double grading, int dim, double boundary_grading) {
  return RadialGrid(GridSpec{n_nodes, grading, boundary_grading}, dim);
}

GridPtr make_shared_grid(const GridSpec& spec, int dim) {
  return std::make_shared<const RadialGrid>(spec, dim);
}

}  // namespace fracsing
