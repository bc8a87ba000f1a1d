#include <benchmark/benchmark.h>

#include <optional>

#include "fracsing/green_operator.hpp"
#include "fracsing/halpha_form.hpp"
#include "fracsing/kernel.hpp"
#include "fracsing/picard.hpp"
#include "fracsing/stability.hpp"

using namespace fracsing;

namespace {

const ProblemParams kParams(2, 0.75, 2.0, 0.0);

GridPtr grid(int n) {
  GridSpec spec;
  spec.n_nodes = n;
  return make_shared_grid(spec, 2);
}

const GreenOperator& op400() {
  static const GreenOperator op = assemble(grid(400), kParams);
  return op;
}

void BM_IncompleteBeta(benchmark::State& state) {
  const BallGreenKernel g(2, 0.75);
  double z = 0.0;
  for (auto _ : state) {
    z += 1e-7;
    benchmark::DoNotOptimize(g.from_invariants(0.01 + z, 0.5));
  }
}
BENCHMARK(BM_IncompleteBeta);

void BM_IncompleteBetaReference(benchmark::State& state) {
  const BallGreenKernel g(2, 0.75);
  double z = 0.0;
  for (auto _ : state) {
    z += 1e-7;
    benchmark::DoNotOptimize(g.from_invariants_reference(0.01 + z, 0.5));
  }
}
BENCHMARK(BM_IncompleteBetaReference);

void BM_SphereMean(benchmark::State& state) {
  const BallGreenKernel g(2, 0.75);
  const double s = state.range(0) == 0 ? 0.4 : 0.41;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.sphere_mean(0.4, s));
  }
}
BENCHMARK(BM_SphereMean)->Arg(0)->Arg(1);

void BM_Assemble(benchmark::State& state) {
  const auto g = grid(static_cast<int>(state.range(0)));
  AssemblyOptions opts;
  opts.threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(g, kParams, opts));
  }
}
BENCHMARK(BM_Assemble)->Args({100, 1})->Args({200, 1})->Args({200, 0})->Unit(benchmark::kMillisecond);

void BM_PicardMinimal(benchmark::State& state) {
  const double k = static_cast<double>(state.range(0)) / 100.0;
  const auto& op = op400();
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate_minimal(kParams.with_k(k), op, {}));
  }
}
BENCHMARK(BM_PicardMinimal)->Arg(5)->Arg(127)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_FindKStar(benchmark::State& state) {
  const auto& op = op400();
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_kstar(kParams, op));
  }
}
BENCHMARK(BM_FindKStar)->Unit(benchmark::kMillisecond);

void BM_Sigma1(benchmark::State& state) {
  const auto u = iterate_minimal(kParams.with_k(1.0), op400(), {}).profile;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigma1(u, kParams.with_k(1.0), op400()));
  }
}
BENCHMARK(BM_Sigma1)->Unit(benchmark::kMillisecond);

void BM_BuildForm(benchmark::State& state) {
  const auto& op = op400();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_form(op));
  }
}
BENCHMARK(BM_BuildForm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
