#include <cmath>

#include "doctest.h"
#include "fracsing/halpha_form.hpp"
#include "fracsing/picard.hpp"
#include "fracsing/stability.hpp"
#include "support.hpp"

using namespace fracsing;
using fracsing::testing::params;

namespace {

const KStarBracket& bracket() {
  static const KStarBracket br = find_kstar(params(), fracsing::testing::op());
  return br;
}

RadialFunction minimal(double k) {
  auto rep = iterate_minimal(params(k), fracsing::testing::op(), {});
  REQUIRE(rep.status == SolveStatus::Converged);
  return rep.profile;
}

}  // namespace

TEST_CASE("zero profile has infinite sigma1") {
  const auto& op = fracsing::testing::op();
  const auto rep = sigma1(RadialFunction::zero(op.grid()), params(), op);
  CHECK(rep.infinite);
  CHECK(rep.stable());
}

TEST_CASE("minimal solutions below 0.9 k_lo are stable") {
  const auto& op = fracsing::testing::op();
  for (double f : {0.1, 0.5, 0.9}) {
    const double k = f * bracket().k_lo;
    const auto rep = sigma1(minimal(k), params(k), op);
    CHECK(rep.sigma1 > 1.0);
    CHECK(rep.gap > 0.0);
    CHECK(rep.gap == doctest::Approx(1.0 - 1.0 / rep.sigma1));
    for (int i = 0; i < op.size(); ++i) {
      CHECK(rep.eigfun.total(i) > 0.0);
    }
  }
}

TEST_CASE("operator, dense and Rayleigh routes agree") {
  const auto& op = fracsing::testing::op();
  const auto form = build_form(op);
  for (double k : {0.05, 1.0, 2.0}) {
    const auto u = minimal(k);
    const auto rep = sigma1(u, params(k), op);
    CHECK(std::abs(rep.sigma1 / sigma1_dense(u, params(k), op) - 1.0) <= 1e-8);
    CHECK(std::abs(rep.sigma1 / sigma1_rayleigh(u, params(k), form) - 1.0) <= 1e-6);
  }
}

TEST_CASE("sigma1 decreases along the branch toward semi-stability") {
  const auto& op = fracsing::testing::op();
  const auto scan = stability_gap_scan(params(), op, bracket(), 8);
  REQUIRE(scan.samples.size() == 8);
  CHECK(scan.nonincreasing);
  for (std::size_t j = 1; j < scan.samples.size(); ++j) {
    CHECK(scan.samples[j].sigma1 < scan.samples[j - 1].sigma1);
    CHECK(scan.samples[j].k > scan.samples[j - 1].k);
  }
  // Independent dense eigensolves at each sample.
  for (const auto& s : scan.samples) {
    const auto u = minimal(s.k);
    CHECK(sigma1_dense(u, params(s.k), op) == doctest::Approx(s.sigma1).epsilon(1e-7));
  }
  const auto& last = scan.samples.back();
  CHECK(last.k == doctest::Approx(bracket().k_lo));
  CHECK(std::abs(last.sigma1 - 1.0) <= 0.1);
  CHECK(last.distance == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gap at k_lo / 2 is positive") {
  const double k = 0.5 * bracket().k_lo;
  CHECK(sigma1(minimal(k), params(k), fracsing::testing::op()).gap > 0.0);
}
