// Serial vs OpenMP drivers of the three hot kernels. Outputs are
// bit-identical across drivers, so only the wall time differs.

#include <benchmark/benchmark.h>

#include <vector>

#include "rangelab/step_distribution.hpp"
#include "rangelab/execution.hpp"
#include "rangelab/replicas.hpp"
#include "rangelab/return_probability.hpp"
#include "rangelab/return_table.hpp"

namespace {

using namespace rangelab;

Execution exec_of(const benchmark::State& s) { return s.range(0) ? Execution::kParallel : Execution::kSerial; }

void BM_ReturnProbs(benchmark::State& state) {
  const auto d = StepDistribution::king();
  const auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(return_probs(d, n, exec_of(state)));
  state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_ReturnProbs)->ArgsProduct({{0, 1}, {1 << 12, 1 << 14}})->Unit(benchmark::kMillisecond);

void BM_NonreturnDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto u = return_probs(StepDistribution::srw(), n);
  for (auto _ : state) benchmark::DoNotOptimize(nonreturn_direct(u, exec_of(state)));
  state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_NonreturnDirect)->ArgsProduct({{0, 1}, {1 << 12, 1 << 14}})->Unit(benchmark::kMillisecond);

void BM_SimulateRanges(benchmark::State& state) {
  const auto d = StepDistribution::srw();
  ReplicaRequest req;
  req.checkpoints = {static_cast<std::size_t>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ranges(d, req, 1, 0, 256, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * 256 * state.range(1));
  state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_SimulateRanges)->ArgsProduct({{0, 1}, {1 << 10, 1 << 14}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
