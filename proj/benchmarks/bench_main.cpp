#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dunkl/annihilate.hpp"
#include "dunkl/grid.hpp"
#include "dunkl/kernel.hpp"
#include "dunkl/schrodinger.hpp"
#include "dunkl/thinsets.hpp"
#include "dunkl/transform.hpp"

using namespace dunkl;

namespace {

void BM_KernelEvaluate(benchmark::State& state) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  std::vector<double> xs(1024), ys(1024);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = u(rng);
    ys[i] = u(rng);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const std::vector<double> x{xs[i % xs.size()]}, y{ys[i % ys.size()]};
    benchmark::DoNotOptimize(evaluate_kernel(x, y, cfg, KernelMode::minus_i));
    ++i;
  }
}
BENCHMARK(BM_KernelEvaluate);

void BM_OperatorBuild(benchmark::State& state) {
  const GridPtr g = QuadratureGrid::build(12.0, static_cast<int>(state.range(0)), RootSystemConfig::rank_one(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(TransformOperator::build(g));
}
BENCHMARK(BM_OperatorBuild)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_PropagateMultiplier(benchmark::State& state) {
  const GridPtr g = QuadratureGrid::build(12.0, static_cast<int>(state.range(0)), RootSystemConfig::rank_one(1.0));
  const TransformPtr op = TransformOperator::build(g);
  const SampledFunction u0 = SampledFunction::sample_1d(g, [](double x) { return cplx(std::exp(-0.5 * x * x), 0.0); });
  for (auto _ : state) benchmark::DoNotOptimize(propagate_multiplier(u0, 1.0, op));
}
BENCHMARK(BM_PropagateMultiplier)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_AnnihilationNorm(benchmark::State& state) {
  const RootSystemConfig cfg = RootSystemConfig::rank_one(1.0);
  const int n = static_cast<int>(state.range(0));
  const SetUnion s = generate_comb(0.05, 11, cfg, 0xD01C).set;
  const SetUnion sigma = generate_comb(0.05, 11, cfg, 0xD01C + 1).set;
  const AnnihilationOperator h(
      s, sigma, TransformOperator::build(adapted_grid(12.0, n, cfg, {s}), adapted_grid(12.0, n, cfg, {sigma})));
  const NormMethod method = state.range(1) == 0 ? NormMethod::svd : NormMethod::power;
  for (auto _ : state) benchmark::DoNotOptimize(h.norm(method));
  state.SetLabel(state.range(1) == 0 ? "svd" : "power");
}
BENCHMARK(BM_AnnihilationNorm)->Args({512, 0})->Args({512, 1})->Args({1024, 0})->Args({1024, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
