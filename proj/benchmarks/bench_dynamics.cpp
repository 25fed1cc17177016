#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "holderlab/holder.hpp"
#include "holderlab/schwarzian.hpp"
#include "holderlab/skew_product.hpp"

using namespace holderlab;

namespace {

void BM_ContinuePeriodic(benchmark::State& state) {
  const SkewProductSystem sys(BaseSystem::finite_cycle(3),
                              {fibers::scaled_tanh(0.5, 1.0), fibers::scaled_tanh(0.8), fibers::scaled_tanh(1.5)});
  const TranslationFamily fam(sys);
  const auto p = find_periodic(fam, 0.0, {0.0, 3}, 0.0);
  std::vector<double> grid;
  for (int k = -50; k <= 50; ++k) grid.push_back(0.001 * k);
  for (auto _ : state) benchmark::DoNotOptimize(continue_periodic(fam, p, grid).samples.size());
}
BENCHMARK(BM_ContinuePeriodic);

void BM_ConjugatePoint(benchmark::State& state) {
  const SkewProductSystem sys(BaseSystem::rotation(0.6180339887498949), [](double x) {
    return fibers::translated(fibers::scaled_tanh(0.5), 0.3 * std::sin(2 * M_PI * x));
  });
  const TranslationFamily fam(sys);
  const Point z = invariant_point(fam, 0.2, 0.0);
  ConjugateOptions opt;
  opt.depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(conjugate_point(fam, z, 0.005, opt).nu);
}
BENCHMARK(BM_ConjugatePoint)->Arg(100)->Arg(200)->Arg(400);

void BM_HolderFit(benchmark::State& state) {
  const auto e = catalog_entry("quadratic");
  const auto grid = dyadic_grid(1e-12, 1e-2);
  for (auto _ : state) {
    const auto curve = displacement_curve(CurveSource::RootTracking, e.family, e.target, grid);
    benchmark::DoNotOptimize(fit_holder(curve).alpha);
  }
}
BENCHMARK(BM_HolderFit);

void BM_Distortion(benchmark::State& state) {
  const SkewProductSystem sys(BaseSystem::finite_cycle(1), {fibers::scaled_tanh(0.9)});
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(distortion_ratio(sys, 0.0, {0.05, 0.06}, n).ratio);
}
BENCHMARK(BM_Distortion)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
