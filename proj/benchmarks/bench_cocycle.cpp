#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "holderlab/cocycle.hpp"
#include "holderlab/hyperbolicity.hpp"

using namespace holderlab;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void BM_MinSupPairwise(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = ScalarCocycle::with_default_bound(uniform(rng, n, 0.2, 5.0));
  const Perturbation w(uniform(rng, n, -1.0, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(min_sup_value(c, w));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MinSupPairwise)->RangeMultiplier(2)->Range(8, 512)->Complexity();

void BM_MinSupLineSearch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = ScalarCocycle::with_default_bound(uniform(rng, n, 0.2, 5.0));
  const Perturbation w(uniform(rng, n, -1.0, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(line_search_min_sup(c, w));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MinSupLineSearch)->RangeMultiplier(2)->Range(8, 512)->Complexity();

void BM_BruteForceWorst(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = ScalarCocycle::with_default_bound(uniform(rng, n, 0.2, 5.0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_worst(c, 1000, 7).value);
}
BENCHMARK(BM_BruteForceWorst)->DenseRange(2, 12, 2);

void BM_Classify(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = uniform(rng, static_cast<std::size_t>(state.range(0)), 0.5, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(classify(a, 8).verdict);
}
BENCHMARK(BM_Classify)->Range(1 << 10, 1 << 16);

}  // namespace
