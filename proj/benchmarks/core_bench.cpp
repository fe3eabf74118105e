#include <benchmark/benchmark.h>

#include "lgt/adversaries.hpp"
#include "lgt/configuration.hpp"
#include "lgt/entropic_policy.hpp"
#include "lgt/harness.hpp"

namespace {

using namespace lgt;

LayeredTree random_run_tree(std::size_t w, std::size_t t) {
  return replay(gen_random(w, t, 11, 0.5, 0.2));
}

void BM_ExplicitArgmin(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  const LayeredTree tree = random_run_tree(w, 200);
  const HeightProfile h = heights(tree);
  for (auto _ : state) benchmark::DoNotOptimize(explicit_argmin(tree, h));
  state.counters["nodes"] = static_cast<double>(tree.active_preorder().size());
}
BENCHMARK(BM_ExplicitArgmin)->RangeMultiplier(2)->Range(2, 32);

void BM_OtCost(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  const Instance inst = gen_random(w, 200, 11, 0.5, 0.2);
  const LayeredTree before = replay(inst, 199);
  const LayeredTree after = replay(inst);
  const Configuration a = explicit_argmin(before, heights(before)).config;
  const Configuration b = explicit_argmin(after, heights(after)).config;
  for (auto _ : state) benchmark::DoNotOptimize(ot_cost(a, b));
}
BENCHMARK(BM_OtCost)->RangeMultiplier(2)->Range(2, 32);

void BM_OtCoupling(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  const Instance inst = gen_random(w, 200, 11, 0.5, 0.2);
  const LayeredTree before = replay(inst, 199);
  const LayeredTree after = replay(inst);
  const Configuration a = explicit_argmin(before, heights(before)).config;
  const Configuration b = explicit_argmin(after, heights(after)).config;
  for (auto _ : state) benchmark::DoNotOptimize(ot_coupling(after, a, b));
}
BENCHMARK(BM_OtCoupling)->RangeMultiplier(2)->Range(2, 32);

void BM_RunFractional(benchmark::State& state) {
  const Instance inst = gen_comb(static_cast<std::size_t>(state.range(0)), 200);
  RunConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(run_fractional(inst, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.depth()));
}
BENCHMARK(BM_RunFractional)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
