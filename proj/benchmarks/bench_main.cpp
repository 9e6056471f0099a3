#include <benchmark/benchmark.h>

#include "choicerank/engine.hpp"
#include "choicerank/generators.hpp"
#include "choicerank/hilbert.hpp"
#include "choicerank/rng.hpp"
#include "choicerank/simulator.hpp"

using namespace choicerank;

namespace {

TrafficMarginals flat_traffic(std::size_t n, std::uint64_t seed) {
  TrafficMarginals t(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) t.c_in[i] = t.c_out[i] = 100.0 + double(rng.below(401));
  return t;
}

// arg 0: node count, arg 1: 1 = hilbert order
void BM_Iteration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DirectedGraph g = random_regular_out_graph(n, 10, 1);
  if (state.range(1)) g = hilbert_reorder(g);
  const TrafficMarginals t = flat_traffic(n, 2);
  ChoiceRankSolver solver(g, t, {});
  for (auto _ : state) {
    solver.iterate();
    benchmark::DoNotOptimize(solver.lambda(0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_Iteration)
    ->ArgsProduct({{1 << 14, 1 << 17, 1 << 20}, {0, 1}})
    ->ArgNames({"n", "hilbert"})
    ->Unit(benchmark::kMillisecond);

void BM_HilbertReorder(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DirectedGraph g = random_regular_out_graph(n, 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_reorder(g).edge_count());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_HilbertReorder)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const DirectedGraph g = random_strongly_connected_graph(1000, 4, 3);
  const StrengthVector lambda = lognormal_strengths(1000, 1.0, 4);
  TrajectorySpec spec;
  spec.num_trajectories = 100;
  spec.length = 1000;
  for (auto _ : state) {
    spec.seed++;
    benchmark::DoNotOptimize(sample_trajectories(g, lambda, spec).total());
  }
  state.SetItemsProcessed(state.iterations() * 100 * 1000);
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
