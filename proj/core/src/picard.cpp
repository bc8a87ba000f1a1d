#include "fracsing/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracsing/compose.hpp"
#include "fracsing/errors.hpp"
#include "fracsing/spectral.hpp"

namespace fracsing {

namespace {

void check_operator(const ProblemParams& params, const GreenOperator& op) {
  params.validate();
  if (op.dim() != params.dim || op.alpha() != params.alpha) {
    throw InvalidArgument("operator was assembled for different (N, alpha)");
  }
}

double pow_pos(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::Diverged: return "Diverged";
    case SolveStatus::MaxIterations: return "MaxIterations";
  }
  return "unknown";
}

SolveReport iterate_minimal(const ProblemParams& params, const GreenOperator& op, double tol,
                            int max_iter) {
  SolveOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return iterate_minimal(params, op, opts);
}

SolveReport iterate_minimal(const ProblemParams& params, const GreenOperator& op,
                            const SolveOptions& opts) {
  check_operator(params, op);
  const auto& grid = op.grid();
  const int n = op.size();
  const double beta = params.singular_exponent();
  const double k = params.k;
  const auto d = op.dirac_column();
  const double c_fund = fundamental_constant(params.dim, params.alpha);

  SolveReport rep;
  if (opts.barrier != nullptr && !op.compatible(*opts.barrier)) {
    throw InvalidArgument("barrier lives on a different grid");
  }
  if (opts.warm_start != nullptr && !op.compatible(*opts.warm_start)) {
    throw InvalidArgument("warm start lives on a different grid");
  }

  if (k == 0.0) {
    rep.status = SolveStatus::Converged;
    rep.iterations = 1;
    rep.profile = RadialFunction::zero(grid, beta);
    rep.barrier_certified = opts.barrier != nullptr && opts.barrier->is_nonnegative();
    rep.increments.push_back(0.0);
    if (opts.keep_iterates) {
      rep.iterates.push_back(rep.profile);
    }
    return rep;
  }

  // Smooth remainder of k d once k c_fund r^beta is split off symbolically.
  std::vector<double> base(static_cast<std::size_t>(n));
  std::vector<double> base_values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    base[ui] = k * d[ui];
    base_values[ui] = k * (d[ui] - c_fund * std::pow(grid->node(i), beta));
  }
  auto make_profile = [&](const std::vector<double>& correction) {
    std::vector<double> values(base_values);
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] += correction[i];
    }
    return RadialFunction(grid, std::move(values), k * c_fund, beta);
  };

  const auto v0 = RadialFunction(grid, base_values, k * c_fund, beta);
  if (!v0.power_integrable(params.p)) {
    rep.status = SolveStatus::Diverged;
    rep.iterations = 1;
    rep.sup_residual = std::numeric_limits<double>::infinity();
    rep.fixed_point_residual = std::numeric_limits<double>::infinity();
    rep.profile = v0;
    rep.note = "nonexistence: (k G[delta])^p is not integrable at the origin since p >= N/(N-2 alpha)"
               " = " + std::to_string(params.critical_exponent());
    return rep;
  }

  std::vector<double> barrier;
  if (opts.barrier != nullptr) {
    barrier = opts.barrier->total();
  }
  const double max_d = *std::max_element(d.begin(), d.end());
  const double ceiling = opts.ceiling_factor * k * max_d;

  std::vector<double> prev = opts.warm_start != nullptr ? opts.warm_start->total() : base;
  std::vector<double> power(static_cast<std::size_t>(n));
  std::vector<double> current(static_cast<std::size_t>(n));
  std::vector<double> increment(static_cast<std::size_t>(n));
  std::vector<double> correction(static_cast<std::size_t>(n), 0.0);
  bool barrier_ok = opts.barrier != nullptr;
  rep.max_barrier_excess = -std::numeric_limits<double>::infinity();

  if (opts.keep_iterates) {
    rep.iterates.push_back(opts.warm_start != nullptr ? *opts.warm_start : v0);
  }
  if (opts.barrier != nullptr) {
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double excess = prev[ui] - barrier[ui];
      rep.max_barrier_excess = std::max(rep.max_barrier_excess, excess);
      if (excess > opts.monotone_slack * std::max(1.0, std::abs(barrier[ui]))) {
        barrier_ok = false;
      }
    }
  }

  rep.status = SolveStatus::MaxIterations;
  for (int it = 1; it <= opts.max_iter; ++it) {
    for (int i = 0; i < n; ++i) {
      power[static_cast<std::size_t>(i)] = pow_pos(prev[static_cast<std::size_t>(i)], params.p);
    }
    correction = op.apply(power);
    bool finite = true;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      current[ui] = base[ui] + correction[ui];
      increment[ui] = current[ui] - prev[ui];
      finite = finite && std::isfinite(current[ui]);
      const double slack = opts.monotone_slack * std::max(1.0, std::abs(current[ui]));
      if (increment[ui] < -slack) {
        rep.monotone = false;
      }
      rep.max_monotone_violation = std::max(rep.max_monotone_violation, -increment[ui]);
      if (opts.barrier != nullptr) {
        const double excess = current[ui] - barrier[ui];
        rep.max_barrier_excess = std::max(rep.max_barrier_excess, excess);
        if (excess > opts.monotone_slack * std::max(1.0, std::abs(barrier[ui]))) {
          barrier_ok = false;
        }
      }
    }
    rep.iterations = it;
    if (!finite) {
      rep.status = SolveStatus::Diverged;
      rep.sup_residual = std::numeric_limits<double>::infinity();
      rep.note = "iterate overflowed";
      break;
    }
    const double delta = grid->weighted_sup(increment, beta);
    rep.sup_residual = delta;
    rep.increments.push_back(delta);
    if (opts.keep_iterates) {
      rep.iterates.push_back(make_profile(correction));
    }
    prev.swap(current);

    if (delta <= opts.tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
    if (grid->weighted_sup(correction, beta) > ceiling) {
      rep.status = SolveStatus::Diverged;
      rep.note = "weighted norm of the iterate exceeded the divergence ceiling";
      break;
    }
    const auto w = static_cast<std::size_t>(opts.growth_window);
    if (rep.increments.size() > w &&
        delta > opts.growth_factor * rep.increments[rep.increments.size() - 1 - w]) {
      rep.status = SolveStatus::Diverged;
      rep.note = "increments grew by more than a factor " + std::to_string(opts.growth_factor) +
                 " over " + std::to_string(opts.growth_window) + " iterations";
      break;
    }
  }

  rep.profile = make_profile(correction);
  if (rep.status != SolveStatus::Diverged) {
    rep.fixed_point_residual = grid->weighted_sup(fixed_point_defect(rep.profile, params, op), beta);
  } else {
    rep.fixed_point_residual = std::numeric_limits<double>::infinity();
  }
  rep.barrier_certified = barrier_ok && rep.status == SolveStatus::Converged;
  if (rep.status == SolveStatus::MaxIterations) {
    rep.note = "iteration cap reached";
  }
  return rep;
}

std::vector<double> fixed_point_defect(const RadialFunction& v, const ProblemParams& params,
                                       const GreenOperator& op) {
  if (!op.compatible(v)) {
    throw InvalidArgument("fixed_point_defect: function lives on a different grid");
  }
  const auto total = v.total();
  std::vector<double> power(total.size());
  for (std::size_t i = 0; i < total.size(); ++i) {
    power[i] = pow_pos(total[i], params.p);
  }
  auto image = op.apply(power);
  const auto d = op.dirac_column();
  for (std::size_t i = 0; i < total.size(); ++i) {
    image[i] = total[i] - image[i] - params.k * d[i];
  }
  return image;
}

double barrier_t(double p) {
  return std::pow(p / (p - 1.0), p);
}

double barrier_k(double p, double c2) {
  return std::pow(1.0 / (c2 * p), 1.0 / (p - 1.0)) * (p - 1.0) / p;
}

RadialFunction barrier_profile(const ProblemParams& params, const GreenOperator& op, double t) {
  check_operator(params, op);
  const auto h = composed_dirac(op, params.p);
  const auto d = op.dirac_column();
  const double scale = t * std::pow(params.k, params.p);
  std::vector<double> w(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    w[i] = scale * h[i] + params.k * d[i];
  }
  return RadialFunction(op.grid(), std::move(w));
}

BarrierCertificate barrier_certificate(const ProblemParams& params, const GreenOperator& op,
                                       double c2_measured, const SolveOptions& opts) {
  check_operator(params, op);
  if (!params.subcritical()) {
    throw InvalidRegime("barrier certificate needs p < N/(N-2 alpha)");
  }
  BarrierCertificate cert;
  const double p = params.p;
  cert.t_star = barrier_t(p);
  cert.k_p = barrier_k(p, c2_measured);
  cert.condition_lhs = c2_measured * std::pow(params.k, p - 1.0);
  cert.condition_rhs = (1.0 / p) * std::pow((p - 1.0) / p, p - 1.0);
  if (params.k == 0.0) {
    cert.certified = true;
    cert.solve = iterate_minimal(params, op, opts);
    return cert;
  }
  if (cert.condition_lhs > cert.condition_rhs) {
    cert.certified = false;
    return cert;
  }
  const auto w = barrier_profile(params, op, cert.t_star);
  SolveOptions with_barrier = opts;
  with_barrier.barrier = &w;
  cert.solve = iterate_minimal(params, op, with_barrier);
  cert.max_excess = cert.solve.max_barrier_excess;
  cert.certified = cert.solve.barrier_certified;
  return cert;
}

namespace {

// Largest violation of u_hi >= u_lo in the weighted sup norm, relative to |u_lo|.
double order_violation(const RadialFunction& lo, const RadialFunction& hi, double beta) {
  const auto a = lo.total();
  const auto b = hi.total();
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff[i] = std::max(0.0, a[i] - b[i]);
  }
  const double scale = lo.grid()->weighted_sup(a, beta);
  return scale > 0.0 ? lo.grid()->weighted_sup(diff, beta) / scale : 0.0;
}

}  // namespace

KStarBracket find_kstar(const ProblemParams& params, const GreenOperator& op, double rel_width,
                        const SolveOptions& opts) {
  check_operator(params, op);
  if (!params.subcritical()) {
    throw InvalidRegime("k* is only defined for p < N/(N-2 alpha) = " +
                        std::to_string(params.critical_exponent()));
  }
  if (!(rel_width > 0.0)) {
    throw InvalidArgument("bracket width must be positive");
  }
  constexpr double kOrderTol = 1e-7;
  const double beta = params.singular_exponent();
  KStarBracket br;
  br.c2 = measure_c2(op, params.p);
  br.k_p = barrier_k(params.p, br.c2);

  auto probe = [&](double k, const RadialFunction* warm) {
    SolveOptions o = opts;
    o.warm_start = warm;
    o.barrier = nullptr;
    auto rep = iterate_minimal(params.with_k(k), op, o);
    br.probes.push_back({k, rep.status, rep.iterations});
    return rep;
  };

  auto first = probe(br.k_p, nullptr);
  if (first.status != SolveStatus::Converged) {
    throw NumericalError("minimal iteration failed at k_p = " + std::to_string(br.k_p) +
                         " where the barrier guarantees convergence");
  }
  br.k_lo = br.k_p;
  br.profile_lo = first.profile;

  auto accept = [&](double k, SolveReport& rep) {
    if (order_violation(br.profile_lo, rep.profile, beta) > kOrderTol) {
      throw NumericalError("minimal solutions are not increasing in k between " +
                           std::to_string(br.k_lo) + " and " + std::to_string(k));
    }
    br.k_lo = k;
    br.profile_lo = std::move(rep.profile);
  };

  double k = 2.0 * br.k_lo;
  for (int doubling = 0;; ++doubling) {
    if (doubling > 60) {
      throw NumericalError("no divergence found while doubling k");
    }
    auto rep = probe(k, &br.profile_lo);
    if (rep.status == SolveStatus::Converged) {
      accept(k, rep);
      k *= 2.0;
    } else {
      br.k_hi = k;
      break;
    }
  }
  while (br.k_hi - br.k_lo > rel_width * br.k_lo) {
    const double mid = 0.5 * (br.k_lo + br.k_hi);
    auto rep = probe(mid, &br.profile_lo);
    if (rep.status == SolveStatus::Converged) {
      accept(mid, rep);
    } else {
      br.k_hi = mid;
    }
  }
  return br;
}

RadialFunction extremal_solution(const ProblemParams& params, const GreenOperator& op,
                                 const KStarBracket& bracket, const SolveOptions& opts) {
  if (!(bracket.k_lo < bracket.k_hi)) {
    throw InvalidArgument("invalid k* bracket");
  }
  auto rep = iterate_minimal(params.with_k(bracket.k_lo), op, opts);
  if (rep.status != SolveStatus::Converged) {
    throw NumericalError("minimal iteration did not converge at k_lo");
  }
  return rep.profile;
}

Eigenpair first_eigenpair(const GreenOperator& op, double tol, int max_iter) {
  const int n = op.size();
  Eigen::Map<const Eigen::VectorXd> mass(op.grid()->weights().data(), n);
  const auto& m = op.matrix();
  auto res = power_iteration([&](const Eigen::VectorXd& x) { return Eigen::VectorXd(m * x); },
                             mass, Eigen::VectorXd::Ones(n), {tol, max_iter});
  Eigen::VectorXd phi = res.vector;
  if (phi.sum() < 0.0) {
    phi = -phi;
  }
  Eigenpair out;
  out.mu1 = res.eigenvalue;
  out.lambda1 = 1.0 / res.eigenvalue;
  out.iterations = res.iterations;
  out.phi1 = RadialFunction(op.grid(), std::vector<double>(phi.data(), phi.data() + n));
  return out;
}

ExtremalBound extremal_bound(const RadialFunction& u, const Eigenpair& eig, double p) {
  const auto total = u.total();
  const auto phi = eig.phi1.values();
  const auto& grid = *u.grid();
  ExtremalBound b;
  for (int i = 0; i < grid.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    b.lhs += grid.weight(i) * pow_pos(total[ui], p) * phi[ui];
    b.rhs += grid.weight(i) * phi[ui];
  }
  b.rhs *= std::pow(eig.lambda1, p / (p - 1.0));
  return b;
}

}  // namespace fracsing
