#include <benchmark/benchmark.h>

#include "wclt/chaos.hpp"
#include "wclt/graph_weight_stats.hpp"
#include "wclt/parallel.hpp"
#include "wclt/rng.hpp"

using namespace wclt;

namespace {

Kernel random_int0(const GridSpec& grid, int order, std::uint64_t seed) {
  Tensor t(grid, order);
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = 2.0 * counter_uniform(seed, 1, i) - 1.0;
  return psi_bar(symmetrize(t));
}

KernelFamily bench_family() {
  const GridSpec grid{8, 4};
  KernelFamily F(grid);
  F.add(random_int0(grid, 1, 1));
  F.add(random_int0(grid, 2, 2));
  return F;
}

const CopyIndex& triangle_index() {
  static const CopyIndex index(named_pattern("triangle"), 30);
  return index;
}

// Arg: thread count.
void BM_SimulateRaw(benchmark::State& state) {
  set_thread_count(static_cast<int>(state.range(0)));
  const auto model = WeightModel::uniform(1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_raw(triangle_index(), 0.5, model, 1, 2000));
  state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_SimulateRawSerial(benchmark::State& state) {
  const auto model = WeightModel::uniform(1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_raw_serial(triangle_index(), 0.5, model, 1, 2000));
  state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_SampleFamily(benchmark::State& state) {
  set_thread_count(static_cast<int>(state.range(0)));
  const auto F = bench_family();
  for (auto _ : state) benchmark::DoNotOptimize(sample_family(F, 20000, 1));
  state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_SampleFamilySerial(benchmark::State& state) {
  const auto F = bench_family();
  for (auto _ : state) benchmark::DoNotOptimize(sample_family_serial(F, 20000, 1));
  state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_Census(benchmark::State& state) {
  set_thread_count(static_cast<int>(state.range(0)));
  const CopyIndex index(named_pattern("cycle:4"), 10);
  for (auto _ : state) benchmark::DoNotOptimize(intersection_pair_census(index));
}

void BM_CensusSerial(benchmark::State& state) {
  const CopyIndex index(named_pattern("cycle:4"), 10);
  for (auto _ : state) benchmark::DoNotOptimize(intersection_pair_census_serial(index));
}

void BM_SteinRhs(benchmark::State& state) {
  set_thread_count(static_cast<int>(state.range(0)));
  const auto F = bench_family();
  for (auto _ : state) benchmark::DoNotOptimize(stein_rhs(F, 20000, 1));
}

}  // namespace

BENCHMARK(BM_SimulateRaw)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime();
BENCHMARK(BM_SimulateRawSerial)->UseRealTime();
BENCHMARK(BM_SampleFamily)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime();
BENCHMARK(BM_SampleFamilySerial)->UseRealTime();
BENCHMARK(BM_Census)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime();
BENCHMARK(BM_CensusSerial)->UseRealTime();
BENCHMARK(BM_SteinRhs)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime();

BENCHMARK_MAIN();
