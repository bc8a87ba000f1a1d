#include <cmath>

#include "doctest.h"
#include "fracsing/compose.hpp"
#include "fracsing/errors.hpp"
#include "support.hpp"

using namespace fracsing;

TEST_CASE("regime classification by tau against 2 alpha") {
  CHECK(composition_regime(ProblemParams(2, 0.75, 2.0, 0.0)) == CompositionRegime::Bounded);
  CHECK(composition_regime(ProblemParams(2, 0.75, 3.0, 0.0)) == CompositionRegime::Logarithmic);
  CHECK(composition_regime(ProblemParams(2, 0.75, 3.5, 0.0)) == CompositionRegime::Power);
  CHECK(std::string(to_string(CompositionRegime::Logarithmic)) == "logarithmic");
}

TEST_CASE("innermost decade fit") {
  const auto g = fracsing::testing::grid();
  std::vector<double> f(static_cast<std::size_t>(g->size()));
  for (int i = 0; i < g->size(); ++i) {
    f[static_cast<std::size_t>(i)] = 2.0 * std::pow(g->node(i), -0.3);
  }
  const auto fit = innermost_decade_fit(g->nodes(), f);
  CHECK(fit.slope == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(fit.r_lo == g->node(3));
  CHECK(fit.r_hi <= 10.0 * g->node(3));
  CHECK(fit.points >= 4);
  CHECK_THROWS_AS(innermost_decade_fit(g->nodes().subspan(300), std::span(f).subspan(300)), InvalidArgument);
}

TEST_CASE("bounded regime: G[d^p] bounded near 0, c2 finite") {
  const auto& op = fracsing::testing::op();
  const ProblemParams params(2, 0.75, 2.0, 0.0);
  const auto rep = compose_estimate_check(params, op);
  CHECK(rep.regime == CompositionRegime::Bounded);
  CHECK(rep.regime_consistent);
  CHECK(std::abs(rep.fitted_exponent) < 0.05);
  CHECK(rep.c2 > 0.0);
  CHECK(std::isfinite(rep.c2));
  CHECK(rep.c2 == doctest::Approx(measure_c2(op, 2.0)));
}

TEST_CASE("logarithmic regime: G[d^p] / |log r| bounded") {
  const auto& op = fracsing::testing::op();
  const auto rep = compose_estimate_check(ProblemParams(2, 0.75, 3.0, 0.0), op);
  CHECK(rep.regime == CompositionRegime::Logarithmic);
  CHECK(rep.regime_consistent);
}

TEST_CASE("power regime: exponent 2 alpha - tau recovered") {
  // At grading 2 the innermost decade (r ~ 3e-4) is still pre-asymptotic for the
  // power regime; grading 3 moves it to r ~ 1e-5.
  const auto& op = fracsing::testing::op(2, 0.75, 400, 3.0);
  const auto rep = compose_estimate_check(ProblemParams(2, 0.75, 3.5, 0.0), op);
  CHECK(rep.regime == CompositionRegime::Power);
  CHECK(rep.predicted_exponent == doctest::Approx(-0.25));
  CHECK(std::abs(rep.fitted_exponent - rep.predicted_exponent) <= 0.05);
  CHECK(rep.regime_consistent);
}

TEST_CASE("c2 is stable under node doubling") {
  const auto& coarse = fracsing::testing::op(2, 0.75, 400);
  const auto& fine = fracsing::testing::op(2, 0.75, 800);
  const auto rep = compose_estimate_check(ProblemParams(2, 0.75, 2.0, 0.0), coarse, &fine);
  CHECK(rep.refinement_change <= 0.05);
  CHECK(rep.c2_refined > 0.0);
  CHECK_THROWS_AS(compose_estimate_check(ProblemParams(2, 0.75, 2.0, 0.0), coarse, &fine, 1e-12),
                  NumericalError);
}

TEST_CASE("supercritical powers are rejected") {
  const auto& op = fracsing::testing::op();
  CHECK_THROWS_AS(compose_estimate_check(ProblemParams(2, 0.75, 4.0, 0.0), op), InvalidRegime);
}
