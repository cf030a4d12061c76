#include <benchmark/benchmark.h>

#include <random>

#include "sinai/concentration_stats.hpp"
#include "sinai/theory.hpp"
#include "sinai/walker.hpp"

namespace {

using namespace sinai;

const SupportExtremes kSym = SupportExtremes::from_bounds(0.25, 0.75);

void BM_WalkerSteps(benchmark::State& state) {
  const double p = solve_balanced_weight(0.25, 0.75);
  Walker w(Environment::iid({{0.25, 0.75}, {p, 1.0 - p}}, 1));
  w.reset(1);
  const auto steps = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    w.advance(steps);
    benchmark::DoNotOptimize(w.position());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WalkerSteps)->Arg(1 << 20);

void BM_ValleyWalkerSteps(benchmark::State& state) {
  Walker w(Environment::valley_th1(kSym));
  w.reset(1);
  for (auto _ : state) {
    w.advance(1 << 20);
    benchmark::DoNotOptimize(w.position());
  }
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}
BENCHMARK(BM_ValleyWalkerSteps);

LocalTimeTable random_table(std::size_t width) {
  std::mt19937_64 rng(5);
  std::vector<std::uint64_t> counts(width);
  for (auto& c : counts) c = rng() % 1000 + 1;
  return LocalTimeTable(0, counts);
}

void BM_WindowSup(benchmark::State& state) {
  const auto t = random_table(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(window_sup(t.view(), 10));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WindowSup)->RangeMultiplier(8)->Range(64, 1 << 18)->Complexity();

void BM_ConcentrationRadius(benchmark::State& state) {
  const auto t = random_table(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(concentration_radius(t.view(), Fraction(9, 10)));
}
BENCHMARK(BM_ConcentrationRadius)->RangeMultiplier(8)->Range(64, 1 << 18);

void BM_EnumerateExact(benchmark::State& state) {
  const auto env = Environment::valley_th1(kSym);
  const std::vector<Fraction> deltas{Fraction(1, 4)};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_exact(env, static_cast<std::uint64_t>(state.range(0)), deltas));
}
BENCHMARK(BM_EnumerateExact)->DenseRange(10, 16, 2);

void BM_WindowMassLimit(benchmark::State& state) {
  const auto r = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(window_mass_limit(r, kSym));
}
BENCHMARK(BM_WindowMassLimit)->Arg(2)->Arg(20)->Arg(200);

void BM_RadiusLimitNearOne(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(radius_limit(1.0 - 1e-10, kSym));
}
BENCHMARK(BM_RadiusLimitNearOne);

}  // namespace

BENCHMARK_MAIN();
