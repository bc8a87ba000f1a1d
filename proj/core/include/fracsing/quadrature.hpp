#pragma once

#include <vector>

namespace fracsing {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
};

/// Supported orders: 4, 6, 8, 9, 10, 12, 16, 20, 24, 32.
const QuadratureRule& gauss_legendre(int order);

}  // namespace fracsing
