#include "fracsing/quadrature.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "fracsing/errors.hpp"

namespace fracsing {

namespace {

template <unsigned Order>
QuadratureRule expand_rule() {
  using rule = boost::math::quadrature::gauss<double, Order>;
  const auto& half_nodes = rule::abscissa();
  const auto& half_weights = rule::weights();
  QuadratureRule out;
  for (std::size_t i = 0; i < half_nodes.size(); ++i) {
    out.nodes.push_back(half_nodes[i]);
    out.weights.push_back(half_weights[i]);
    if (half_nodes[i] != 0.0) {
      out.nodes.push_back(-half_nodes[i]);
      out.weights.push_back(half_weights[i]);
    }
  }
  std::vector<std::size_t> order(out.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.nodes[a] < out.nodes[b]; });
  QuadratureRule sorted;
  for (auto i : order) {
    sorted.nodes.push_back(out.nodes[i]);
    sorted.weights.push_back(out.weights[i]);
  }
  return sorted;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  switch (order) {
    case 4: { static const auto r = expand_rule<4>(); return r; }
    case 6: { static const auto r = expand_rule<6>(); return r; }
    case 8: { static const auto r = expand_rule<8>(); return r; }
    case 9: { static const auto r = expand_rule<9>(); return r; }
    case 10: { static const auto r = expand_rule<10>(); return r; }
    case 12: { static const auto r = expand_rule<12>(); return r; }
    case 16: { static const auto r = expand_rule<16>(); return r; }
    case 20: { static const auto r = expand_rule<20>(); return r; }
    case 24: { static const auto r = expand_rule<24>(); return r; }
    case 32: { static const auto r = expand_rule<32>(); return r; }
    default:
      throw InvalidArgument("unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

}  // namespace fracsing
