#include "fracsing/green_operator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "fracsing/errors.hpp"
#include "fracsing/kernel.hpp"
#include "fracsing/quadrature.hpp"

namespace fracsing {

namespace {

int worker_count(int requested, int rows) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(1, rows));
}

// Runs body(i) for i in [0, rows) on interleaved rows; rethrows the first failure.
template <class Body>
void parallel_rows(int rows, int threads, Body&& body) {
  std::exception_ptr failure;
  std::mutex guard;
  auto worker = [&](int start, int stride) {
    try {
      for (int i = start; i < rows; i += stride) {
        body(i);
      }
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) {
        failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker, t, threads);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

/// Integrals of s -> K(r, s) |S| s^{N-1} over pieces of a panel, in the distance
/// variable t = |s - r| with the anchored map t = t1 u^m that flattens the
/// r == s singularity; pieces reaching s = 1 switch to s = 1 - L u^2 on their
/// outer half to resolve the (1 - s)^alpha boundary layer.
class NearField {
public:
  NearField(const BallGreenKernel& kernel, int order)
      : kernel_(kernel),
        rule_(gauss_legendre(order)),
        area_(sphere_area(kernel.dim())),
        m_(std::clamp(2.0 / kernel.alpha(), 2.0, 12.0)) {}

  // int over s in [r + side*t0, r + side*t1].
  [[nodiscard]] double piece(double r, double t0, double t1, int side) const {
    if (t1 <= t0) {
      return 0.0;
    }
    const double far_end = r + side * t1;
    if (side > 0 && far_end >= 1.0) {
      const double c = 0.5 * (r + t0 + 1.0);
      return anchored(r, t0, c - r, side) + boundary(r, c);
    }
    return anchored(r, t0, t1, side);
  }

private:
  [[nodiscard]] double density(double r, double offset) const {
    return kernel_.sphere_mean_offset(r, offset) * area_ * std::pow(r + offset, kernel_.dim() - 1);
  }

  [[nodiscard]] double anchored(double r, double t0, double t1, int side) const {
    const double u0 = t0 > 0.0 ? std::pow(t0 / t1, 1.0 / m_) : 0.0;
    const double half = 0.5 * (1.0 - u0);
    double sum = 0.0;
    for (int q = 0; q < rule_.size(); ++q) {
      const double u = u0 + half * (rule_.nodes[static_cast<std::size_t>(q)] + 1.0);
      const double um1 = std::pow(u, m_ - 1.0);
      const double t = t1 * um1 * u;
      const double jac = t1 * m_ * um1;
      sum += rule_.weights[static_cast<std::size_t>(q)] * density(r, side * t) * jac;
    }
    return half * sum;
  }

  [[nodiscard]] double boundary(double r, double c) const {
    const double len = 1.0 - c;
    double sum = 0.0;
    for (int q = 0; q < rule_.size(); ++q) {
      const double u = 0.5 * (rule_.nodes[static_cast<std::size_t>(q)] + 1.0);
      const double s = 1.0 - len * u * u;
      sum += rule_.weights[static_cast<std::size_t>(q)] * density(r, s - r) * 2.0 * len * u;
    }
    return 0.5 * sum;
  }

  const BallGreenKernel& kernel_;
  const QuadratureRule& rule_;
  double area_;
  double m_;
};

bool is_near(double r, const RadialGrid::Panel& panel) {
  const double width = panel.hi - panel.lo;
  if (r >= panel.lo && r <= panel.hi) {
    return true;
  }
  const double dist = r < panel.lo ? panel.lo - r : r - panel.hi;
  return dist < width;
}

}  // namespace

GreenOperator::GreenOperator(GridPtr grid, int dim, double alpha, Eigen::MatrixXd matrix,
                             std::vector<double> dirac_column)
    : grid_(std::move(grid)), dim_(dim), alpha_(alpha), dirac_(std::move(dirac_column)) {
  if (!grid_) {
    throw InvalidArgument("Green operator needs a grid");
  }
  const int n = grid_->size();
  if (matrix.rows() != n || matrix.cols() != n || static_cast<int>(dirac_.size()) != n) {
    throw InvalidArgument("Green operator data does not match its grid");
  }
  Eigen::Map<const Eigen::VectorXd> w(grid_->weights().data(), n);
  kernel_ = matrix * w.cwiseInverse().asDiagonal();
  kernel_ = (0.5 * (kernel_ + kernel_.transpose())).eval();
  matrix_ = kernel_ * w.asDiagonal();
  sqrt_w_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    sqrt_w_[static_cast<std::size_t>(i)] = std::sqrt(grid_->weight(i));
  }
  Eigen::Map<const Eigen::VectorXd> sw(sqrt_w_.data(), n);
  symmetric_ = sw.asDiagonal() * kernel_ * sw.asDiagonal();
  auto factor = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(symmetric_);
  if (factor->info() != Eigen::Success) {
    throw NumericalError("Green operator is not positive definite on this grid");
  }
  factor_ = std::move(factor);
}

std::vector<double> GreenOperator::apply(std::span<const double> f) const {
  if (static_cast<int>(f.size()) != size()) {
    throw InvalidArgument("apply: vector length does not match the operator");
  }
  Eigen::Map<const Eigen::VectorXd> x(f.data(), size());
  std::vector<double> out(f.size());
  Eigen::Map<Eigen::VectorXd>(out.data(), size()) = matrix_ * x;
  return out;
}

RadialFunction GreenOperator::apply(const RadialFunction& f) const {
  if (!compatible(f)) {
    throw InvalidArgument("apply: function lives on a different grid");
  }
  return RadialFunction(grid_, apply(f.total()));
}

std::vector<double> GreenOperator::solve(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != size()) {
    throw InvalidArgument("solve: vector length does not match the operator");
  }
  const int n = size();
  Eigen::Map<const Eigen::VectorXd> sw(sqrt_w_.data(), n);
  Eigen::Map<const Eigen::VectorXd> b(xi.data(), n);
  const Eigen::VectorXd y = factor_->solve(sw.cwiseProduct(b));
  std::vector<double> out(xi.size());
  Eigen::Map<Eigen::VectorXd>(out.data(), n) = y.cwiseQuotient(sw);
  return out;
}

GreenOperator GreenOperator::rescaled(double radius) const {
  auto grid = std::make_shared<const RadialGrid>(grid_->rescaled(radius));
  const double scale = std::pow(radius, 2.0 * alpha_);
  const double dirac_scale = std::pow(radius, 2.0 * alpha_ - dim_);
  std::vector<double> dirac(dirac_);
  for (auto& d : dirac) {
    d *= dirac_scale;
  }
  return GreenOperator(std::move(grid), dim_, alpha_, scale * matrix_, std::move(dirac));
}

bool GreenOperator::compatible(const RadialFunction& f) const {
  if (!f.grid()) {
    return false;
  }
  if (f.grid() == grid_) {
    return true;
  }
  return f.size() == size() &&
         std::equal(f.grid()->nodes().begin(), f.grid()->nodes().end(), grid_->nodes().begin());
}

GreenOperator assemble(const GridPtr& grid, const ProblemParams& params,
                       const AssemblyOptions& opts) {
  params.validate();
  if (!grid) {
    throw InvalidArgument("assemble: null grid");
  }
  if (grid->dim() != params.dim) {
    throw InvalidArgument("assemble: grid dimension does not match params");
  }
  const BallGreenKernel kernel(params.dim, params.alpha);
  const int n = grid->size();
  const int threads = worker_count(opts.threads, n);
  const auto nodes = grid->nodes();
  const auto weights = grid->weights();
  const auto& panels = grid->panels();

  Eigen::MatrixXd k_mat = Eigen::MatrixXd::Zero(n, n);

  parallel_rows(n, threads, [&](int i) {
    const double r = nodes[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      double value = 0.0;
      try {
        value = kernel.sphere_mean(r, nodes[static_cast<std::size_t>(j)]);
      } catch (const std::exception& e) {
        throw NumericalError("kernel evaluation failed at (" + std::to_string(i) + "," +
                             std::to_string(j) + "): " + e.what());
      }
      if (!std::isfinite(value) || value < 0.0) {
        throw NumericalError("kernel evaluation produced " + std::to_string(value) + " at (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
      }
      k_mat(i, j) = value;
      k_mat(j, i) = value;
    }
  });

  const NearField near(kernel, opts.near_order);
  std::vector<double> diagonal(static_cast<std::size_t>(n), 0.0);
  parallel_rows(n, threads, [&](int i) {
    const double r = nodes[static_cast<std::size_t>(i)];
    double exact = 0.0;
    double discrete = 0.0;
    try {
      for (const auto& panel : panels) {
        if (!is_near(r, panel)) {
          continue;
        }
        if (r > panel.lo && r < panel.hi) {
          exact += near.piece(r, 0.0, r - panel.lo, -1);
          exact += near.piece(r, 0.0, panel.hi - r, +1);
        } else if (r <= panel.lo) {
          exact += near.piece(r, panel.lo - r, panel.hi - r, +1);
        } else {
          exact += near.piece(r, r - panel.hi, r - panel.lo, -1);
        }
        for (int j = panel.first; j < panel.first + panel.count; ++j) {
          if (j != i) {
            discrete += k_mat(i, j) * weights[static_cast<std::size_t>(j)];
          }
        }
      }
    } catch (const std::exception& e) {
      throw NumericalError("near-field integral failed at (" + std::to_string(i) + "," +
                           std::to_string(i) + "): " + e.what());
    }
    diagonal[static_cast<std::size_t>(i)] = (exact - discrete) / weights[static_cast<std::size_t>(i)];
  });
  for (int i = 0; i < n; ++i) {
    k_mat(i, i) = diagonal[static_cast<std::size_t>(i)];
  }

  Eigen::Map<const Eigen::VectorXd> w(weights.data(), n);
  Eigen::MatrixXd matrix = k_mat * w.asDiagonal();
  std::vector<double> dirac(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    dirac[static_cast<std::size_t>(i)] = kernel.dirac(nodes[static_cast<std::size_t>(i)]);
  }
  return GreenOperator(grid, params.dim, params.alpha, std::move(matrix), std::move(dirac));
}

}  // namespace fracsing
