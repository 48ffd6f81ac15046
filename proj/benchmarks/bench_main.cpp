#include <benchmark/benchmark.h>

#include "rsmt/abvh.hpp"
#include "rsmt/bench.hpp"
#include "rsmt/pipeline.hpp"
#include "rsmt/solvers.hpp"

namespace {

void BM_AbvhBuild(benchmark::State& state) {
  const auto pts = rsmt::generate_net(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto h = rsmt::Abvh::build(pts, 50);
    benchmark::DoNotOptimize(h.stats().leaf_count);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AbvhBuild)->RangeMultiplier(2)->Range(1 << 12, 1 << 19)->Complexity(benchmark::oNLogN);

void BM_Neighbors(benchmark::State& state) {
  const auto pts = rsmt::generate_net(static_cast<std::size_t>(state.range(0)), 2);
  const auto h = rsmt::Abvh::build(pts, 50);
  for (auto _ : state) benchmark::DoNotOptimize(rsmt::neighbors(h).pairs.size());
}
BENCHMARK(BM_Neighbors)->Range(1 << 12, 1 << 18);

void BM_Rmst(benchmark::State& state) {
  const auto pts = rsmt::generate_net(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(rsmt::rmst(pts).length);
}
BENCHMARK(BM_Rmst)->RangeMultiplier(2)->Range(16, 1024);

void BM_IteratedOneSteiner(benchmark::State& state) {
  const auto pts = rsmt::generate_net(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(rsmt::iterated_one_steiner(pts).length);
}
BENCHMARK(BM_IteratedOneSteiner)->RangeMultiplier(2)->Range(8, 128);

void BM_Exact(benchmark::State& state) {
  const auto pts = rsmt::generate_net(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(rsmt::exact_rsmt(pts).length);
}
BENCHMARK(BM_Exact)->DenseRange(3, 7);

void BM_Pipeline(benchmark::State& state) {
  const auto pts = rsmt::generate_net(static_cast<std::size_t>(state.range(0)), 6);
  rsmt::PipelineConfig config;
  config.block_size = static_cast<std::size_t>(state.range(1));
  config.solver.kind = rsmt::SolverKind::iterated_one_steiner;
  config.parallel_blocks = false;
  for (auto _ : state) benchmark::DoNotOptimize(rsmt::run_pipeline(pts, config).tree.length);
}
BENCHMARK(BM_Pipeline)->ArgsProduct({{1000, 4000, 16000}, {30, 50}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
