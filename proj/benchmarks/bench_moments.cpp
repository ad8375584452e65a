#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "varbound/bounds.hpp"
#include "varbound/moments.hpp"
#include "varbound/shard.hpp"

namespace {

std::vector<double> sample(std::size_t n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> dist(1e3, 5.0);
  std::vector<double> xs(n);
  for (auto& x : xs) x = dist(rng);
  return xs;
}

void BM_Push(benchmark::State& state) {
  const auto xs = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    varbound::MomentAccumulator acc;
    for (const double x : xs) acc = varbound::push(acc, x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Push)->Range(1 << 10, 1 << 20);

void BM_FromValues(benchmark::State& state) {
  const auto xs = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(varbound::from_values(xs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FromValues)->Range(1 << 10, 1 << 20);

void BM_Merge(benchmark::State& state) {
  const auto xs = sample(2048);
  const auto a = varbound::from_values(std::span(xs).first(1000));
  const auto b = varbound::from_values(std::span(xs).subspan(1000));
  for (auto _ : state) benchmark::DoNotOptimize(varbound::merge(a, b));
}
BENCHMARK(BM_Merge);

void BM_RunPlan(benchmark::State& state) {
  const auto xs = sample(1 << 18);
  const varbound::MergePlan plan{static_cast<std::uint64_t>(state.range(0)), 7,
                                 varbound::Topology::random_tree};
  for (auto _ : state) benchmark::DoNotOptimize(varbound::run_plan(xs, plan));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_RunPlan)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CheckSamuelson(benchmark::State& state) {
  const auto xs = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(varbound::check_samuelson(xs));
}
BENCHMARK(BM_CheckSamuelson)->Range(1 << 8, 1 << 16);

}  // namespace
BENCHMARK_MAIN();
