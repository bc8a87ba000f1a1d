#include "fracsing/mountain_pass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/LU>
#include <boost/math/tools/minima.hpp>

#include "fracsing/classify.hpp"
#include "fracsing/errors.hpp"
#include "fracsing/picard.hpp"
#include "fracsing/stability.hpp"

namespace fracsing {

double nonlinearity_F(double s, double t, double p) {
  if (t <= 0.0) {
    return 0.0;
  }
  if (s <= 0.0) {
    return std::pow(t, p + 1.0) / (p + 1.0);
  }
  const double x = t / s;
  const double scale = std::pow(s, p + 1.0) / (p + 1.0);
  if (x < 0.1) {
    // Binomial series of (1+x)^{p+1} - 1 - (p+1)x.
    double coeff = (p + 1.0) * p / 2.0;
    double xj = x * x;
    double sum = 0.0;
    for (int j = 2; j <= 24; ++j) {
      sum += coeff * xj;
      coeff *= (p + 1.0 - j) / (j + 1.0);
      xj *= x;
    }
    return scale * sum;
  }
  return scale * (std::expm1((p + 1.0) * std::log1p(x)) - (p + 1.0) * x);
}

double nonlinearity_f(double s, double t, double p) {
  if (t <= 0.0) {
    return 0.0;
  }
  if (s <= 0.0) {
    return std::pow(t, p);
  }
  return std::pow(s, p) * std::expm1(p * std::log1p(t / s));
}

double nonlinearity_df(double s, double t, double p) {
  if (t <= 0.0) {
    return 0.0;
  }
  return p * std::pow(std::max(s, 0.0) + t, p - 1.0);
}

double energy(std::span<const double> v, std::span<const double> u_total,
              const DiscreteHAlphaForm& form, double p) {
  const auto w = form.mass();
  double potential = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    potential += w[i] * nonlinearity_F(u_total[i], v[i], p);
  }
  return 0.5 * form.quadratic(v) - potential;
}

double energy(const RadialFunction& v, const RadialFunction& u_min, const DiscreteHAlphaForm& form,
              const ProblemParams& params) {
  if (v.is_zero()) {
    return 0.0;
  }
  return energy(v.total(), u_min.total(), form, params.p);
}

std::vector<double> energy_gradient(std::span<const double> v, std::span<const double> u_total,
                                    const GreenOperator& op, double p) {
  std::vector<double> f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    f[i] = nonlinearity_f(u_total[i], v[i], p);
  }
  auto g = op.apply(f);
  for (std::size_t i = 0; i < v.size(); ++i) {
    g[i] = v[i] - g[i];
  }
  return g;
}

const char* to_string(SecondSolutionMethod method) {
  switch (method) {
    case SecondSolutionMethod::MountainPassAlgorithm: return "MountainPassAlgorithm";
    case SecondSolutionMethod::DeflatedNewton: return "DeflatedNewton";
  }
  return "unknown";
}

namespace {

double sup_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

/// phi(t) = E(t z) for a fixed direction z, using ||z||_A^2 computed once.
class Ray {
public:
  Ray(std::vector<double> z, std::span<const double> u, const DiscreteHAlphaForm& form, double p)
      : z_(std::move(z)), u_(u), w_(form.mass()), p_(p), a_(form.quadratic(z_)) {}

  [[nodiscard]] double value(double t) const {
    double pot = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      pot += w_[i] * nonlinearity_F(u_[i], t * z_[i], p_);
    }
    return 0.5 * t * t * a_ - pot;
  }
  [[nodiscard]] double slope(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      s += w_[i] * nonlinearity_f(u_[i], t * z_[i], p_) * z_[i];
    }
    return t * a_ - s;
  }
  [[nodiscard]] double curvature(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      s += w_[i] * nonlinearity_df(u_[i], t * z_[i], p_) * z_[i] * z_[i];
    }
    return a_ - s;
  }
  [[nodiscard]] const std::vector<double>& direction() const { return z_; }

  /// Smallest T on the doubling sequence with phi(T) < 0.
  [[nodiscard]] double negative_endpoint() const {
    double t = 1.0;
    for (int i = 0; i < 200; ++i) {
      if (value(t) < 0.0) {
        return t;
      }
      t *= 2.0;
    }
    throw NumericalError("energy stays positive along the ray; direction has no positive part");
  }

  /// argmax over t > 0 of phi: samples on [0, T] with `segments` pieces, Brent, then Newton.
  [[nodiscard]] std::pair<double, double> maximize(int segments) const {
    const double end = negative_endpoint();
    int best = 0;
    double best_val = 0.0;
    for (int j = 1; j <= segments; ++j) {
      const double val = value(end * j / segments);
      if (val > best_val) {
        best_val = val;
        best = j;
      }
    }
    if (best == 0) {
      // Maximum lies inside the first segment.
      best = 1;
    }
    const double lo = end * (best - 1) / segments;
    const double hi = end * std::min(best + 1, segments) / segments;
    auto r = boost::math::tools::brent_find_minima([&](double t) { return -value(t); }, lo, hi,
                                                   std::numeric_limits<double>::digits / 2);
    double t = r.first;
    for (int it = 0; it < 8; ++it) {
      const double c = curvature(t);
      if (!(c < 0.0)) {
        break;
      }
      const double next = t - slope(t) / c;
      if (!(next > lo && next < hi)) {
        break;
      }
      const bool done = std::abs(next - t) <= 1e-15 * std::abs(t);
      t = next;
      if (done) {
        break;
      }
    }
    return {t, value(t)};
  }

private:
  std::vector<double> z_;
  std::span<const double> u_;
  std::span<const double> w_;
  double p_;
  double a_;
};

std::vector<double> a_normalized(std::vector<double> z, const DiscreteHAlphaForm& form) {
  const double a = std::sqrt(form.quadratic(z));
  if (!(a > 0.0)) {
    throw NumericalError("zero direction");
  }
  for (auto& v : z) {
    v /= a;
  }
  return z;
}

MountainPassResult run_mpa(const ProblemParams& params, const GreenOperator& op,
                           const DiscreteHAlphaForm& form, std::span<const double> u,
                           const MountainPassOptions& opts) {
  MountainPassResult res;
  res.method = SecondSolutionMethod::MountainPassAlgorithm;
  const auto eig = first_eigenpair(op);
  std::vector<double> z = a_normalized({eig.phi1.values().begin(), eig.phi1.values().end()}, form);

  {
    Ray ray(z, u, form, params.p);
    const double end = ray.negative_endpoint();
    res.endpoint_norm = end;
    res.endpoint_energy = ray.value(end);
  }

  double step = 1.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    Ray ray(z, u, form, params.p);
    const auto [t, level] = ray.maximize(opts.segments);
    std::vector<double> v(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      v[i] = t * z[i];
    }
    const auto g = energy_gradient(v, u, op, params.p);
    const double defect = sup_norm(g);
    res.iterations = it;
    res.energy_trace.push_back(level);
    res.residual_trace.push_back(defect);
    if (defect <= opts.tol) {
      res.v = RadialFunction(op.grid(), std::move(v));
      res.energy = level;
      res.fixed_point_residual = defect;
      return res;
    }
    // Descend the ray maximum: z <- v - s grad, with s = 1 giving z = G[f(u, v)].
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving) {
      std::vector<double> trial(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) {
        trial[i] = v[i] - step * g[i];
      }
      trial = a_normalized(std::move(trial), form);
      Ray next(trial, u, form, params.p);
      const double trial_level = next.maximize(opts.segments).second;
      if (trial_level <= level + 1e-14 * std::abs(level)) {
        z = std::move(trial);
        accepted = true;
        step = std::min(1.0, 2.0 * step);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      throw SecondSolutionNotFound("mountain-pass descent stalled", res.residual_trace);
    }
  }
  throw SecondSolutionNotFound("mountain-pass algorithm exhausted its iteration budget",
                               res.residual_trace);
}

MountainPassResult run_deflated_newton(const ProblemParams& params, const GreenOperator& op,
                                       const DiscreteHAlphaForm& form, std::span<const double> u,
                                       const MountainPassOptions& opts) {
  MountainPassResult res;
  res.method = SecondSolutionMethod::DeflatedNewton;
  const int n = op.size();
  const auto w = op.grid()->weights();
  const auto& m = op.matrix();
  std::vector<double> v(u.begin(), u.end());
  for (auto& x : v) {
    x *= opts.newton_start_scale;
  }

  // Deflation of the trivial root: m(v) = 1/||v||_A^2 + 1.
  auto deflation = [&](std::span<const double> x, std::vector<double>* av) {
    auto ax = form.apply(x);
    double q = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      q += x[i] * ax[i];
    }
    if (av != nullptr) {
      *av = std::move(ax);
    }
    return std::pair{1.0 / q + 1.0, q};
  };
  auto merit = [&](std::span<const double> x, const std::vector<double>& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      s += w[i] * r[i] * r[i];
    }
    return deflation(x, nullptr).first * std::sqrt(s);
  };

  const int budget = std::min(opts.max_iter, 500);
  for (int it = 1; it <= budget; ++it) {
    const auto r = energy_gradient(v, u, op, params.p);
    const double defect = sup_norm(r);
    res.iterations = it;
    res.residual_trace.push_back(defect);
    if (defect <= opts.tol) {
      break;
    }
    Eigen::MatrixXd jac = -m;
    for (int j = 0; j < n; ++j) {
      jac.col(j) *= nonlinearity_df(u[static_cast<std::size_t>(j)], v[static_cast<std::size_t>(j)], params.p);
    }
    jac.diagonal().array() += 1.0;
    Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
    const Eigen::VectorXd delta = -jac.partialPivLu().solve(rv);

    std::vector<double> av;
    const auto [mv, q] = deflation(v, &av);
    double grad_dot = 0.0;
    for (int i = 0; i < n; ++i) {
      grad_dot += -2.0 * av[static_cast<std::size_t>(i)] * delta(i) / (q * q);
    }
    const double tau = 1.0 / (1.0 - grad_dot / mv);

    const double current = merit(v, r);
    double lambda = 1.0;
    std::vector<double> trial(v.size());
    for (int halving = 0; halving < 40; ++halving) {
      for (int i = 0; i < n; ++i) {
        trial[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] + lambda * tau * delta(i);
      }
      if (merit(trial, energy_gradient(trial, u, op, params.p)) < current) {
        break;
      }
      lambda *= 0.5;
    }
    v = trial;
    if (it == budget) {
      throw SecondSolutionNotFound("deflated Newton exhausted its iteration budget",
                                   res.residual_trace);
    }
  }
  const double norm = std::sqrt(form.quadratic(v));
  if (!(norm > 1e-8)) {
    throw SecondSolutionNotFound("deflated Newton returned the trivial solution", res.residual_trace);
  }
  res.fixed_point_residual = res.residual_trace.back();
  res.energy = energy(v, u, form, params.p);
  res.energy_trace.push_back(res.energy);
  res.v = RadialFunction(op.grid(), std::move(v));
  return res;
}

}  // namespace

LevelBound level_lower_bound(const ProblemParams& params, const GreenOperator& op,
                             const DiscreteHAlphaForm& form, const RadialFunction& u_min,
                             std::span<const double> reference, double sigma_start,
                             const MountainPassOptions& opts) {
  LevelBound lb;
  const auto st = sigma1(u_min, params, op);
  lb.gap = st.gap;
  const auto u = u_min.total();

  std::vector<std::vector<double>> dirs;
  dirs.push_back(a_normalized({reference.begin(), reference.end()}, form));
  const auto eig = first_eigenpair(op);
  dirs.push_back(a_normalized({eig.phi1.values().begin(), eig.phi1.values().end()}, form));
  if (!st.infinite) {
    dirs.push_back(a_normalized({st.eigfun.values().begin(), st.eigfun.values().end()}, form));
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int d = 0; d < opts.sphere_directions; ++d) {
    std::vector<double> f(static_cast<std::size_t>(op.size()));
    for (auto& x : f) {
      x = uni(rng);
    }
    dirs.push_back(a_normalized(op.apply(f), form));
  }
  lb.directions = static_cast<int>(dirs.size());

  double sigma = sigma_start;
  for (int halving = 0; halving < 80; ++halving) {
    const double beta = 0.25 * lb.gap * sigma * sigma;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& e : dirs) {
      std::vector<double> x(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) {
        x[i] = sigma * e[i];
      }
      worst = std::min(worst, energy(x, u, form, params.p));
    }
    if (worst >= beta) {
      lb.sigma0 = sigma;
      lb.beta = beta;
      lb.sphere_min = worst;
      return lb;
    }
    sigma *= 0.5;
  }
  throw NumericalError("no radius sigma0 found with E >= (gap/4) sigma0^2 on the sampled sphere");
}

MountainPassResult find_second_solution(const ProblemParams& params, const GreenOperator& op,
                                        const DiscreteHAlphaForm& form,
                                        const RadialFunction& u_min, SecondSolutionMethod method,
                                        const MountainPassOptions& opts) {
  params.validate();
  if (!op.compatible(u_min)) {
    throw InvalidArgument("u_min lives on a different grid");
  }
  const auto st = sigma1(u_min, params, op);
  if (!st.stable()) {
    throw InvalidRegime("u_min is not stable (sigma1 = " + std::to_string(st.sigma1) +
                        "); k is at or beyond the extremal value");
  }
  const auto u = u_min.total();
  MountainPassResult res = method == SecondSolutionMethod::MountainPassAlgorithm
                               ? run_mpa(params, op, form, u, opts)
                               : run_deflated_newton(params, op, form, u, opts);
  const auto v = res.v.total();
  if (*std::min_element(v.begin(), v.end()) < -1e-10 * sup_norm(v)) {
    throw SecondSolutionNotFound("critical point is not nonnegative", res.residual_trace);
  }
  res.level = level_lower_bound(params, op, form, u_min, v, 0.5 * std::sqrt(form.quadratic(v)), opts);
  res.level_lower_bound = res.level.beta;
  res.second_solution = u_min + res.v;
  return res;
}

WeakIdentityReport verify_weak_identity(const RadialFunction& w, const ProblemParams& params,
                                        const GreenOperator& op) {
  WeakIdentityReport rep;
  double xi0 = 0.0;
  for (const auto& xi : standard_battery(op)) {
    const double r = pairing(w, xi, params, op) - params.k * xi.value_at_origin;
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, std::abs(r));
    xi0 = std::max(xi0, xi.value_at_origin);
  }
  rep.relative_residual = params.k > 0.0 ? rep.max_residual / (params.k * xi0) : rep.max_residual;
  return rep;
}

}  // namespace fracsing
