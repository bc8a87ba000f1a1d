#include <cmath>

#include "doctest.h"
#include "fracsing/classify.hpp"
#include "fracsing/errors.hpp"
#include "fracsing/picard.hpp"
#include "support.hpp"

using namespace fracsing;
using fracsing::testing::params;

namespace {

RadialFunction minimal(double k) {
  auto rep = iterate_minimal(params(k), fracsing::testing::op(), {});
  REQUIRE(rep.status == SolveStatus::Converged);
  return rep.profile;
}

}  // namespace

TEST_CASE("test functions") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(2.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  const auto& op = fracsing::testing::op();
  const auto battery = standard_battery(op);
  REQUIRE(battery.size() == 3);
  for (const auto& xi : battery) {
    CHECK(xi.value_at_origin == 1.0);
    CHECK(xi.representation_error <= 1e-8);
    for (int i = 0; i < op.size(); ++i) {
      if (op.grid()->node(i) >= xi.r_outer) {
        CHECK(xi.values[static_cast<std::size_t>(i)] == 0.0);
      }
    }
  }
  const auto ring = locality_test_function(op);
  CHECK(ring.value_at_origin == 0.0);
  CHECK(ring.r_inner == doctest::Approx(0.3));
  CHECK(ring.r_outer == doctest::Approx(0.8));
  CHECK_THROWS_AS(plateau_bump(op, 1.2), InvalidArgument);
}

TEST_CASE("zero profile pairs to zero and is removable") {
  const auto& op = fracsing::testing::op();
  const auto zero = RadialFunction::zero(op.grid());
  for (const auto& xi : standard_battery(op)) {
    CHECK(pairing(zero, xi, params(), op) == 0.0);
  }
  const auto rep = classify(zero, params(), op);
  CHECK(rep.verdict == Verdict::Removable);
  CHECK(rep.k_estimate == 0.0);
}

TEST_CASE("mass of the minimal solution") {
  const auto& op = fracsing::testing::op();
  for (double k : {0.01, 0.05, 1.0}) {
    const auto est = estimate_k(minimal(k), params(k), op);
    CHECK(est.k == doctest::Approx(k).epsilon(0.02));
    REQUIRE(est.per_test.size() == 3);
    for (double v : est.per_test) {
      CHECK(v == doctest::Approx(k).epsilon(0.02));
    }
  }
}

TEST_CASE("locality: annulus-supported test functions see no mass") {
  const auto& op = fracsing::testing::op();
  const auto ring = locality_test_function(op);
  for (double k : {0.05, 1.0}) {
    CHECK(std::abs(pairing(minimal(k), ring, params(k), op)) <= 1e-6);
  }
  const auto inner = annulus_bump(op, 0.1, 0.4);
  CHECK(std::abs(pairing(minimal(0.05), inner, params(0.05), op)) <= 1e-6);
}

TEST_CASE("shrinking plateau bumps converge to k xi(0)") {
  const auto& op = fracsing::testing::op();
  const double k = 0.05;
  const auto u = minimal(k);
  double prev = 1.0;
  for (double eps : {0.6, 0.3, 0.1}) {
    const auto xi = plateau_bump(op, eps);
    const double err = std::abs(pairing(u, xi, params(k), op) / k - 1.0);
    CHECK(err <= 0.02);
    CHECK(err <= prev + 1e-6);
    prev = err;
  }
}

TEST_CASE("reconstruction from the Dirac column") {
  const auto& op = fracsing::testing::op();
  const double k = 0.3;
  // u = k d + G[(k d)^p]: exact source is (k d)^p + k delta.
  std::vector<double> kd(static_cast<std::size_t>(op.size()));
  std::vector<double> src(kd.size());
  for (int i = 0; i < op.size(); ++i) {
    kd[static_cast<std::size_t>(i)] = k * op.dirac_column()[i];
    src[static_cast<std::size_t>(i)] = kd[static_cast<std::size_t>(i)] * kd[static_cast<std::size_t>(i)];
  }
  const auto correction = op.apply(src);
  std::vector<double> smooth(correction.begin(), correction.end());
  for (int i = 0; i < op.size(); ++i) {
    smooth[static_cast<std::size_t>(i)] += kd[static_cast<std::size_t>(i)] -
                                           k * fundamental_constant(2, 0.75) * std::pow(op.grid()->node(i), -0.5);
  }
  const RadialFunction u(op.grid(), smooth, k * fundamental_constant(2, 0.75), -0.5);
  CHECK(estimate_k(u, src, op).k == doctest::Approx(k).epsilon(0.02));
}

TEST_CASE("torsion function carries no Dirac mass") {
  const auto& op = fracsing::testing::op();
  std::vector<double> one(static_cast<std::size_t>(op.size()), 1.0);
  const auto t = RadialFunction::from_total(op.grid(), op.apply(one));
  CHECK(std::abs(estimate_k(t, one, op).k) <= 1e-6);
}

TEST_CASE("consistency: the truncated fundamental solution has unit mass") {
  const auto& op = fracsing::testing::op();
  // c_fund r^{2 alpha - N} is G[delta] plus a harmonic correction that is
  // bounded near 0; its pairing with central bumps still returns the mass.
  const auto d = RadialFunction::from_total(op.grid(), op.dirac_column());
  std::vector<double> none(static_cast<std::size_t>(op.size()), 0.0);
  CHECK(estimate_k(d, none, op).k == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("asymptotics of the Dirac column and the minimal solution") {
  const auto& op = fracsing::testing::op();
  const auto d = RadialFunction::pure_singular(op.grid(), fundamental_constant(2, 0.75), -0.5);
  const auto fit = asymptotic_fit(d, params(1.0), 1.0);
  CHECK(fit.exponent_fit == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(fit.limit_ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.verdict == Verdict::DiracSingularity);

  const auto rep = classify(minimal(0.05), params(0.05), op);
  CHECK(std::abs(rep.exponent_fit + 0.5) <= 0.05);
  CHECK(rep.limit_ratio >= 0.9);
  CHECK(rep.limit_ratio <= 1.1);
  CHECK(rep.verdict == Verdict::DiracSingularity);
  CHECK(rep.fit_r_lo == op.grid()->node(3));
  CHECK(std::string(to_string(rep.verdict)) == "DiracSingularity");
}

TEST_CASE("integrability and supercritical profiles") {
  const auto& op = fracsing::testing::op();
  const auto u = minimal(0.05);
  const auto ok = lp_integrability(u, 2.0);
  CHECK(ok.integrable);
  CHECK(std::isfinite(ok.quadrature));
  const auto bad = lp_integrability(u, 4.0);
  CHECK_FALSE(bad.integrable);
  CHECK(std::isinf(bad.quadrature));
  const auto xi = standard_battery(op).front();
  CHECK_THROWS_AS(pairing(u, xi, ProblemParams(2, 0.75, 4.0, 0.05), op), InvalidRegime);
  const auto rep = classify(u, ProblemParams(2, 0.75, 4.0, 0.05), op);
  CHECK(rep.supercritical);
  CHECK(rep.verdict == Verdict::Supercritical);
}
