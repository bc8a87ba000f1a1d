#pragma once

#include <string>
#include <vector>

#include "fracsing/green_operator.hpp"
#include "fracsing/params.hpp"
#include "fracsing/radial_function.hpp"

namespace fracsing {

enum class SolveStatus { Converged, Diverged, MaxIterations };

const char* to_string(SolveStatus status);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 50000;
  /// Divergence when the weighted sup of the smooth part exceeds ceiling_factor * k * max(d).
  double ceiling_factor = 1e6;
  /// Divergence when increments grow by more than growth_factor over growth_window steps.
  double growth_factor = 2.0;
  int growth_window = 10;
  /// Nodewise slack for the monotonicity check, relative to max(1, |v_i|).
  double monotone_slack = 1e-12;
  /// Optional barrier: every iterate is compared against it nodewise.
  const RadialFunction* barrier = nullptr;
  /// Optional starting subsolution (e.g. the minimal solution at a smaller k).
  const RadialFunction* warm_start = nullptr;
  /// Keep every iterate (memory n * iterations); used by tests.
  bool keep_iterates = false;
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  /// Weighted sup of the last increment v_n - v_{n-1} on total profiles.
  double sup_residual = 0.0;
  /// Weighted sup of v - G[v^p] - k d at the returned profile.
  double fixed_point_residual = 0.0;
  /// Every iterate was >= its predecessor up to the slack.
  bool monotone = true;
  double max_monotone_violation = 0.0;
  /// Barrier supplied and never exceeded.
  bool barrier_certified = false;
  double max_barrier_excess = 0.0;
  std::vector<double> increments;
  std::vector<RadialFunction> iterates;
  RadialFunction profile;
  std::string note;
};

/// Monotone iteration v_0 = k d, v_n = k d + G[v_{n-1}^p].  The returned profile
/// carries k c_fund r^{2 alpha - N} as its explicit singular part.
SolveReport iterate_minimal(const ProblemParams& params, const GreenOperator& op,
                            const SolveOptions& opts);
SolveReport iterate_minimal(const ProblemParams& params, const GreenOperator& op, double tol,
                            int max_iter);

/// v - G[v^p] - k d, sampled.
std::vector<double> fixed_point_defect(const RadialFunction& v, const ProblemParams& params,
                                       const GreenOperator& op);

/// t_p = (p / (p-1))^p.
double barrier_t(double p);
/// k_p = (1/(c2 p))^{1/(p-1)} (p-1)/p.
double barrier_k(double p, double c2);
/// w_t = t k^p G[G^p[delta]] + k G[delta].
RadialFunction barrier_profile(const ProblemParams& params, const GreenOperator& op, double t);

struct BarrierCertificate {
  bool certified = false;
  double t_star = 0.0;
  /// Both sides of c2 k^{p-1} <= (1/p) ((p-1)/p)^{p-1}.
  double condition_lhs = 0.0;
  double condition_rhs = 0.0;
  double k_p = 0.0;
  /// Largest nodewise v_n - w_t over all iterates (<= 0 when certified).
  double max_excess = 0.0;
  SolveReport solve;
};

BarrierCertificate barrier_certificate(const ProblemParams& params, const GreenOperator& op,
                                       double c2_measured, const SolveOptions& opts = {});

struct KStarProbe {
  double k;
  SolveStatus status;
  int iterations;
};

struct KStarBracket {
  double k_lo = 0.0;
  double k_hi = 0.0;
  RadialFunction profile_lo;
  double c2 = 0.0;
  double k_p = 0.0;
  std::vector<KStarProbe> probes;
};

/// Brackets k* by doubling from k_p and bisecting until k_hi - k_lo <= rel_width * k_lo.
/// Throws NumericalError if k_p fails to converge or convergent profiles are not
/// increasing in k.
KStarBracket find_kstar(const ProblemParams& params, const GreenOperator& op,
                        double rel_width = 1e-3, const SolveOptions& opts = {});

/// Minimal solution at the lower end of the bracket, re-solved to the requested tolerance.
RadialFunction extremal_solution(const ProblemParams& params, const GreenOperator& op,
                                 const KStarBracket& bracket, const SolveOptions& opts = {});

struct Eigenpair {
  double lambda1 = 0.0;
  double mu1 = 0.0;
  RadialFunction phi1;
  int iterations = 0;
};

/// Principal eigenpair of the operator by power iteration: lambda1 = 1 / mu1,
/// phi1 > 0 with unit weighted L2 norm.
Eigenpair first_eigenpair(const GreenOperator& op, double tol = 1e-10, int max_iter = 20000);

/// Both sides of int u^p phi1 <= lambda1^{p/(p-1)} int phi1.
struct ExtremalBound {
  double lhs = 0.0;
  double rhs = 0.0;
  [[nodiscard]] bool holds() const { return lhs <= rhs; }
};

ExtremalBound extremal_bound(const RadialFunction& u, const Eigenpair& eig, double p);

}  // namespace fracsing
