#include <cmath>
#include <random>

#include "doctest.h"
#include "fracsing/errors.hpp"
#include "fracsing/halpha_form.hpp"
#include "fracsing/picard.hpp"
#include "support.hpp"

using namespace fracsing;

TEST_CASE("form is positive definite") {
  const auto& op = fracsing::testing::op();
  const auto form = build_form(op);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(static_cast<std::size_t>(op.size()));
    for (auto& x : v) {
      x = normal(rng);
    }
    CHECK(form.quadratic(v) > 0.0);
  }
  CHECK(form.condition_number() > 1.0);
  CHECK(form.condition_number() < 1e12);
}

TEST_CASE("minimal Rayleigh quotient is lambda1") {
  const auto& op = fracsing::testing::op();
  const auto form = build_form(op);
  const auto eig = first_eigenpair(op);
  CHECK(std::abs(form.min_rayleigh_quotient() / eig.lambda1 - 1.0) <= 1e-8);
}

TEST_CASE("inverse pairing: G[f]^T A G[f] = int f G[f]") {
  const auto& op = fracsing::testing::op();
  const auto form = build_form(op);
  const auto& g = *op.grid();
  std::vector<std::vector<double>> profiles;
  for (double freq : {0.0, 1.0, 3.0}) {
    std::vector<double> f(static_cast<std::size_t>(op.size()));
    for (int i = 0; i < op.size(); ++i) {
      f[static_cast<std::size_t>(i)] = std::cos(freq * g.node(i)) + 0.5;
    }
    const auto v = op.apply(f);
    CHECK(std::abs(form.quadratic(v) / g.inner(f, v) - 1.0) <= 1e-6);
    const auto av = form.apply(v);
    for (int i = 0; i < op.size(); i += 37) {
      CHECK(av[static_cast<std::size_t>(i)] ==
            doctest::Approx(g.weight(i) * f[static_cast<std::size_t>(i)]).epsilon(1e-6));
    }
    CHECK(form.bilinear(v, v) == doctest::Approx(form.quadratic(v)));
    profiles.push_back(f);
  }
  CHECK(form.inverse_consistency(profiles) <= 1e-6);
}

TEST_CASE("stiffness matrices are consistent") {
  const auto& op = fracsing::testing::op(2, 0.75, 200);
  const auto form = build_form(op);
  const auto& a = form.stiffness();
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const auto& b = form.normalized_stiffness();
  const auto sw = op.sqrt_weights();
  CHECK(a(3, 5) == doctest::Approx(sw[3] * b(3, 5) * sw[5]));
  CHECK_THROWS_AS(DiscreteHAlphaForm(op, 10.0), NumericalError);
}
