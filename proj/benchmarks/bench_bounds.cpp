#include <benchmark/benchmark.h>

#include "optbound/baselines.hpp"
#include "optbound/foo.hpp"
#include "optbound/intervals.hpp"
#include "optbound/pfoo.hpp"
#include "optbound/trace.hpp"

namespace {

using namespace optbound;

struct Workload {
  Trace trace;
  IntervalSet intervals;
  std::uint64_t capacity;
};

// IRM trace with M = N / 20 objects and a cache of 1% of the working set.
Workload make_workload(std::size_t n) {
  IrmConfig c;
  c.num_objects = std::max<std::size_t>(n / 20, 2);
  c.trace_length = n;
  c.zipf_alpha = 0.9;
  c.size_min = 1;
  c.size_max = 10000;
  c.rng_seed = 7;
  Workload w{generate_irm_trace(c), {}, 0};
  w.intervals = build_intervals(w.trace);
  w.capacity = std::max<std::uint64_t>(trace_stats(w.trace).unique_bytes / 100, 1);
  return w;
}

void BM_Foo(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(foo_bounds(w.trace, w.intervals, w.capacity));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Foo)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_PfooLower(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pfoo_lower(w.trace, w.intervals, w.capacity));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PfooLower)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PfooUpper(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  SegmentPlan plan;
  plan.length = 1024;
  for (auto _ : state) benchmark::DoNotOptimize(pfoo_upper(w.trace, w.intervals, w.capacity, plan));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PfooUpper)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);

void BM_Belady(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_belady(w.trace, w.capacity));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Belady)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BeladySize(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_belady_size(w.trace, w.capacity));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BeladySize)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Lru(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_lru(w.trace, w.capacity));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Lru)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Gdsf(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_gdsf(w.trace, w.capacity));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gdsf)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
