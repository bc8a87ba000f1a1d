#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracsing/green_operator.hpp"
#include "fracsing/halpha_form.hpp"
#include "fracsing/params.hpp"
#include "fracsing/radial_function.hpp"

namespace fracsing {

/// F(s, t) = [(s + t+)^{p+1} - s^{p+1} - (p+1) s^p t+] / (p+1), evaluated without cancellation.
double nonlinearity_F(double s, double t, double p);
/// f(s, t) = dF/dt = (s + t+)^p - s^p.
double nonlinearity_f(double s, double t, double p);
/// df/dt = p (s + t)^{p-1} for t > 0, else 0.
double nonlinearity_df(double s, double t, double p);

/// E(v) = 1/2 ||v||_A^2 - sum_i w_i F(u_i, v_i).
double energy(const RadialFunction& v, const RadialFunction& u_min, const DiscreteHAlphaForm& form,
              const ProblemParams& params);
double energy(std::span<const double> v, std::span<const double> u_total,
              const DiscreteHAlphaForm& form, double p);

/// Gradient of E in the A inner product: v - G[f(u, v)].  It is also the fixed-point defect.
std::vector<double> energy_gradient(std::span<const double> v, std::span<const double> u_total,
                                    const GreenOperator& op, double p);

enum class SecondSolutionMethod { MountainPassAlgorithm, DeflatedNewton };

const char* to_string(SecondSolutionMethod method);

struct MountainPassOptions {
  /// Segments of the initial path 0 -> e.
  int segments = 20;
  /// Target weighted sup of the fixed-point defect.
  double tol = 1e-8;
  int max_iter = 5000;
  /// Random smooth directions used when sampling the sphere ||v||_A = sigma0.
  int sphere_directions = 50;
  std::uint64_t seed = 20240521;
  /// DeflatedNewton starts from this multiple of u_min.
  double newton_start_scale = 10.0;
};

struct LevelBound {
  /// beta = (gap / 4) sigma0^2.
  double beta = 0.0;
  double sigma0 = 0.0;
  double gap = 0.0;
  /// Smallest sampled E on ||v||_A = sigma0.
  double sphere_min = 0.0;
  int directions = 0;
};

struct MountainPassResult {
  SecondSolutionMethod method = SecondSolutionMethod::MountainPassAlgorithm;
  RadialFunction v;
  double energy = 0.0;
  double level_lower_bound = 0.0;
  LevelBound level;
  RadialFunction second_solution;
  double fixed_point_residual = 0.0;
  int iterations = 0;
  /// Per-iteration energy and defect (weighted sup).
  std::vector<double> energy_trace;
  std::vector<double> residual_trace;
  /// Endpoint e of the initial path, with E(e) <= 0.
  double endpoint_norm = 0.0;
  double endpoint_energy = 0.0;
};

/// Budget exhausted without a nontrivial critical point.
class SecondSolutionNotFound : public std::runtime_error {
public:
  SecondSolutionNotFound(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  [[nodiscard]] const std::vector<double>& trace() const { return trace_; }

private:
  std::vector<double> trace_;
};

/// beta from the stability gap of u_min: sigma0 starts at sigma_start and is halved until
/// E(sigma0 e) >= (gap/4) sigma0^2 on every sampled unit direction e.
LevelBound level_lower_bound(const ProblemParams& params, const GreenOperator& op,
                             const DiscreteHAlphaForm& form, const RadialFunction& u_min,
                             std::span<const double> reference, double sigma_start,
                             const MountainPassOptions& opts = {});

/// Nontrivial nonnegative solution v of v = G[(u_min + v)^p - u_min^p], so that
/// u_min + v is a second solution.  Throws InvalidRegime when u_min is not stable
/// (k at or beyond the extremal value) and SecondSolutionNotFound on budget exhaustion.
MountainPassResult find_second_solution(const ProblemParams& params, const GreenOperator& op,
                                        const DiscreteHAlphaForm& form,
                                        const RadialFunction& u_min, SecondSolutionMethod method,
                                        const MountainPassOptions& opts = {});

struct WeakIdentityReport {
  /// L(xi) - k xi(0) per battery function.
  std::vector<double> residuals;
  double max_residual = 0.0;
  /// max_residual / (k max xi(0)); equals max_residual when k = 0.
  double relative_residual = 0.0;
};

/// Distributional identity int w (-Delta)^alpha xi = int w^p xi + k xi(0) on the
/// standard battery.
WeakIdentityReport verify_weak_identity(const RadialFunction& w, const ProblemParams& params,
                                        const GreenOperator& op);

}  // namespace fracsing
