#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fracsing/green_operator.hpp"
#include "fracsing/operator_io.hpp"
#include "fracsing/params.hpp"

namespace fracsing::testing {

inline GridPtr grid(int n = 400, int dim = 2, double grading = 2.0) {
  GridSpec spec;
  spec.n_nodes = n;
  spec.grading = grading;
  return make_shared_grid(spec, dim);
}

/// Operators are expensive; each test binary assembles a configuration once and
/// shares it through the on-disk cache with the other binaries.
inline const GreenOperator& op(int dim = 2, double alpha = 0.75, int n = 400, double grading = 2.0) {
  static std::mutex guard;
  static std::map<std::tuple<int, double, int, double>, std::unique_ptr<GreenOperator>> store;
  std::lock_guard lock(guard);
  auto& slot = store[{dim, alpha, n, grading}];
  if (!slot) {
    const std::filesystem::path dir = FRACSING_TEST_CACHE;
    std::filesystem::create_directories(dir);
    ProblemParams params(dim, alpha, 2.0, 0.0);
    slot = std::make_unique<GreenOperator>(cached_assemble(grid(n, dim, grading), params, {}, dir));
  }
  return *slot;
}

inline ProblemParams params(double k = 0.0, double p = 2.0) { return {2, 0.75, p, k}; }

}  // namespace fracsing::testing
