#include <cmath>

#include "doctest.h"
#include "fracsing/errors.hpp"
#include "fracsing/halpha_form.hpp"
#include "fracsing/mountain_pass.hpp"
#include "fracsing/picard.hpp"
#include "support.hpp"

using namespace fracsing;
using fracsing::testing::params;

namespace {

struct Setup {
  KStarBracket bracket;
  double k;
  RadialFunction u_min;
  DiscreteHAlphaForm form;
  MountainPassResult mpa;
  MountainPassResult newton;
};

const Setup& setup() {
  static const Setup s = [] {
    const auto& op = fracsing::testing::op();
    auto br = find_kstar(params(), op);
    const double k = 0.5 * br.k_lo;
    auto rep = iterate_minimal(params(k), op, {});
    auto form = build_form(op);
    auto mpa = find_second_solution(params(k), op, form, rep.profile,
                                    SecondSolutionMethod::MountainPassAlgorithm);
    auto newton = find_second_solution(params(k), op, form, rep.profile,
                                       SecondSolutionMethod::DeflatedNewton);
    return Setup{std::move(br), k, rep.profile, std::move(form), std::move(mpa), std::move(newton)};
  }();
  return s;
}

}  // namespace

TEST_CASE("nonlinearity F, f, f'") {
  for (double p : {1.5, 2.0, 3.0}) {
    for (double s : {0.0, 1e-3, 0.5, 2.0, 40.0}) {
      CHECK(nonlinearity_F(s, 0.0, p) == 0.0);
      CHECK(nonlinearity_F(s, -1.0, p) == 0.0);
      for (double t : {1e-8, 1e-4, 0.01, 0.3, 1.0, 10.0}) {
        const double big_f = nonlinearity_F(s, t, p);
        CHECK(big_f >= 0.0);
        const double direct =
            (std::pow(s + t, p + 1) - std::pow(s, p + 1) - (p + 1) * std::pow(s, p) * t) / (p + 1);
        if (t / std::max(s, 1e-300) > 0.5) {
          CHECK(big_f == doctest::Approx(direct).epsilon(1e-10));
        }
        const double h = 1e-6 * std::max(t, 1e-3);
        const double fd = (nonlinearity_F(s, t + h, p) - nonlinearity_F(s, t - h, p)) / (2 * h);
        CHECK(nonlinearity_f(s, t, p) == doctest::Approx(fd).epsilon(1e-6));
        const double f_ref = s > 0.0 ? std::pow(s, p) * std::expm1(p * std::log1p(t / s)) : std::pow(t, p);
        CHECK(nonlinearity_f(s, t, p) == doctest::Approx(f_ref).epsilon(1e-12));
        CHECK(nonlinearity_df(s, t, p) == doctest::Approx(p * std::pow(s + t, p - 1)));
      }
    }
  }
  // Small t/s: series branch is accurate where the direct formula cancels.
  CHECK(nonlinearity_F(1.0, 1e-6, 2.0) == doctest::Approx(1e-12).epsilon(1e-6));
}

TEST_CASE("energy at zero and along a far ray") {
  const auto& s = setup();
  const auto& op = fracsing::testing::op();
  std::vector<double> zero(static_cast<std::size_t>(op.size()), 0.0);
  const auto u = s.u_min.total();
  CHECK(energy(zero, u, s.form, 2.0) == 0.0);
  std::vector<double> one(static_cast<std::size_t>(op.size()), 1.0);
  const auto v0 = op.apply(one);
  std::vector<double> far(v0);
  for (auto& x : far) {
    x *= 100.0;
  }
  CHECK(energy(far, u, s.form, 2.0) < 0.0);
  // Small multiples lie inside the mountain range.
  std::vector<double> near(v0);
  for (auto& x : near) {
    x *= 1e-3;
  }
  CHECK(energy(near, u, s.form, 2.0) > 0.0);
  const auto grad = energy_gradient(zero, u, op, 2.0);
  for (double g : grad) {
    CHECK(g == 0.0);
  }
}

TEST_CASE("second solution above the minimal one") {
  const auto& s = setup();
  const auto& op = fracsing::testing::op();
  for (const auto* r : {&s.mpa, &s.newton}) {
    CHECK(r->fixed_point_residual <= 1e-6);
    CHECK(r->energy >= r->level_lower_bound);
    CHECK(r->level_lower_bound > 0.0);
    for (int i = 0; i < op.size(); ++i) {
      CHECK(r->second_solution.total(i) > s.u_min.total(i));
    }
    CHECK(r->endpoint_energy <= 0.0);
  }
  double diff = 0.0;
  double scale = 0.0;
  for (int i = 0; i < op.size(); ++i) {
    diff = std::max(diff, std::abs(s.mpa.v.total(i) - s.newton.v.total(i)));
    scale = std::max(scale, std::abs(s.mpa.v.total(i)));
  }
  CHECK(diff <= 1e-4);
  CHECK(scale > 1e-2);  // distinct from the trivial solution
  CHECK(s.mpa.method == SecondSolutionMethod::MountainPassAlgorithm);
  CHECK(s.newton.method == SecondSolutionMethod::DeflatedNewton);
  // The MPA traces energy descent to the critical level.
  REQUIRE(!s.mpa.energy_trace.empty());
  CHECK(s.mpa.energy_trace.back() == doctest::Approx(s.mpa.energy).epsilon(1e-6));
}

TEST_CASE("level lower bound") {
  const auto& s = setup();
  const auto lb = level_lower_bound(params(s.k), fracsing::testing::op(), s.form, s.u_min,
                                    s.mpa.v.values(), 0.5 * std::sqrt(s.form.quadratic(s.mpa.v.values())));
  CHECK(lb.beta > 0.0);
  CHECK(lb.beta == doctest::Approx(0.25 * lb.gap * lb.sigma0 * lb.sigma0));
  CHECK(lb.directions >= 50);
}

TEST_CASE("weak identity holds for both solutions") {
  const auto& s = setup();
  const auto& op = fracsing::testing::op();
  CHECK(verify_weak_identity(s.u_min, params(s.k), op).relative_residual <= 0.02);
  CHECK(verify_weak_identity(s.mpa.second_solution, params(s.k), op).relative_residual <= 0.02);
  const auto zero = verify_weak_identity(RadialFunction::zero(op.grid()), params(0.0), op);
  CHECK(zero.max_residual == 0.0);
}

TEST_CASE("no second solution without a strictly stable minimal one") {
  const auto& s = setup();
  const auto& op = fracsing::testing::op();
  // A profile well above the branch is not stable.
  const auto unstable = s.u_min.scaled(4.0);
  CHECK_THROWS_AS(find_second_solution(params(s.k), op, s.form, unstable,
                                       SecondSolutionMethod::MountainPassAlgorithm),
                  InvalidRegime);
}
