#pragma once

#include <memory>
#include <span>
#include <vector>

namespace fracsing {

/// Shape of a composite graded Gauss-Legendre grid on (0, 1).
///
/// Panel breakpoints are x(j/M), j = 0..M, with
///   x(t) = (2t)^g0 / 2              for t <= 1/2,
///   x(t) = 1 - (2(1-t))^g1 / 2      for t >= 1/2,
/// so panels cluster algebraically toward the origin (exponent g0 = grading)
/// and toward the boundary (exponent g1 = boundary_grading).
struct GridSpec {
  int n_nodes = 400;
  double grading = 2.0;
  /// Zero means "same as grading".
  double boundary_grading = 0.0;

  [[nodiscard]] double effective_boundary_grading() const {
    return boundary_grading > 0.0 ? boundary_grading : grading;
  }
  bool operator==(const GridSpec&) const = default;
};

/// Radial nodes r_i in (0,1) with weights w_i for |S^{N-1}| r^{N-1} dr.
class RadialGrid {
public:
  struct Panel {
    double lo;
    double hi;
    int first;
    int count;
  };

  RadialGrid(const GridSpec& spec, int dim);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int size() const { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] const GridSpec& spec() const { return spec_; }

  [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
  [[nodiscard]] double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  /// Weights for the measure |S^{N-1}| r^{N-1} dr, i.e. for integrals over the ball.
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  /// Plain Gauss weights for dr on (0,1).
  [[nodiscard]] std::span<const double> line_weights() const { return line_weights_; }

  [[nodiscard]] const std::vector<Panel>& panels() const { return panels_; }
  [[nodiscard]] int panel_of(int node) const { return panel_index_[static_cast<std::size_t>(node)]; }

  /// sum_i w_i f_i.
  [[nodiscard]] double integrate(std::span<const double> f) const;
  /// sum_i w_i f_i g_i.
  [[nodiscard]] double inner(std::span<const double> f, std::span<const double> g) const;

  /// Relative accuracy to which sum_i w_i reproduces |B_1|.
  [[nodiscard]] static constexpr double volume_tolerance() { return 1e-12; }

  /// max_i |f_i| min(1, r_i^{-exponent}); with exponent = 2 alpha - N this is the
  /// sup norm weighted by r^{N - 2 alpha}, finite on profiles like r^{2 alpha - N}.
  [[nodiscard]] double weighted_sup(std::span<const double> f, double singular_exponent) const;

  /// Same grid shape rescaled to the ball of radius `radius` < 1 (nodes r R, weights R^N w).
  [[nodiscard]] RadialGrid rescaled(double radius) const;

private:
  RadialGrid() = default;

  GridSpec spec_;
  int dim_ = 2;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> line_weights_;
  std::vector<Panel> panels_;
  std::vector<int> panel_index_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Rejects n_nodes < 16 or grading < 1.
RadialGrid make_grid(int n_nodes, double grading, int dim, double boundary_grading = 0.0);
GridPtr make_shared_grid(const GridSpec& spec, int dim);

}  // namespace fracsing
