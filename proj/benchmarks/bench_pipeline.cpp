// Micro benchmarks for the solver stages on generated instances.

#include <benchmark/benchmark.h>

#include "capra/generator.hpp"
#include "capra/pipeline.hpp"
#include "capra/solver.hpp"
#include "capra/tsp.hpp"

namespace {

using namespace capra;

Instance make_instance(int n) {
  return generate_instance(n, DemandModel::uniform(), 42);
}

Instance make_clustered(int n) {
  return generate_instance(n, DemandModel::clustered(std::max(1, n / 10),
                                                     0.0005),
                            42);
}

void BM_Christofides(benchmark::State& state) {
  Instance inst = make_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(christofides_tour(inst));
  }
}
BENCHMARK(BM_Christofides)->Arg(50)->Arg(200)->Arg(500);

void BM_SolveClassical(benchmark::State& state) {
  Instance inst = make_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_classical(
        inst, DemandVariant::kGeneral, TspBackend::kChristofides));
  }
}
BENCHMARK(BM_SolveClassical)->Arg(50)->Arg(200)->Arg(500);

void BM_SolveNew(benchmark::State& state) {
  Instance inst = make_clustered(static_cast<int>(state.range(0)));
  PipelineConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_new(inst, config));
  }
}
BENCHMARK(BM_SolveNew)->Arg(50)->Arg(200)->Arg(500);

void BM_ForwardWalkFlow(benchmark::State& state) {
  Instance inst = make_clustered(static_cast<int>(state.range(0)));
  VrtgInstance vrtg = build_vrtg_instance(inst, ClusterParams{});
  DepotOrder order = depot_order(inst);
  for (auto _ : state) {
    if (vrtg.num_targets() == 0) continue;
    benchmark::DoNotOptimize(cheapest_forward_walk(vrtg, order));
  }
}
BENCHMARK(BM_ForwardWalkFlow)->Arg(50)->Arg(200)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
