#include <benchmark/benchmark.h>

#include "orlicz/geometry.hpp"
#include "orlicz/level_set.hpp"
#include "orlicz/sweep.hpp"

using namespace orlicz;

static void BM_BallBall(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double d = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball_ball_intersection(d, 1.0, 0.8, n));
    d = d < 1.7 ? d + 1e-4 : 0.1;
  }
}
BENCHMARK(BM_BallBall)->Arg(1)->Arg(2)->Arg(3)->Arg(6)->Arg(10);

static void BM_ExactPiecewise(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto u = TestFunction::piecewise(n, {0.3, 0.7, 1.0, 1.4}, {1.0, -0.5, 2.0, 0.4});
  const auto phi = YoungFunction::llogl();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_piecewise(u, phi, 1.0).value);
  }
}
BENCHMARK(BM_ExactPiecewise)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_IndicatorSweep(benchmark::State& state) {
  const auto grid = make_t_grid(0.2, 1e-6, 16);
  const auto u = TestFunction::indicator(3, 1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(u, YoungFunction::power(2.0), grid, SweepOptions{}).grid_sup);
  }
}
BENCHMARK(BM_IndicatorSweep)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloFull(benchmark::State& state) {
  const auto u = TestFunction::gaussian(2, 1.0, 1.0);
  const auto phi = YoungFunction::power(2.0);
  MonteCarloOptions opts;
  opts.samples = static_cast<std::uint64_t>(state.range(0));
  opts.truncation_radius = 5.0;
  opts.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_full(u, phi, 0.5, opts).value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloFull)
    ->Args({100'000, 1})
    ->Args({1'000'000, 1})
    ->Args({1'000'000, 4})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
