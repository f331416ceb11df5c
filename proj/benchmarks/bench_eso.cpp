#include <benchmark/benchmark.h>

#include "quartz/eso.hpp"
#include "quartz/synth.hpp"

using namespace quartz;

namespace {

DataMatrix bench_matrix() {
  SynthSpec spec;
  spec.n = 1 << 15;
  spec.d = 4096;
  spec.density = 2e-3;
  spec.seed = 5;
  return synth_instance(spec);
}

void BM_VTauNice(benchmark::State& state) {
  static const DataMatrix m = bench_matrix();
  const auto tau = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(v_tau_nice(m, tau));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.nnz()));
}
BENCHMARK(BM_VTauNice)->Arg(1)->Arg(64);

void BM_VDistributed(benchmark::State& state) {
  static const DataMatrix m = bench_matrix();
  const auto nodes = static_cast<std::size_t>(state.range(0));
  const Partition cells = contiguous_partition(m.cols(), nodes);
  for (auto _ : state) benchmark::DoNotOptimize(v_distributed(m, nodes, 16, cells));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.nnz()));
}
BENCHMARK(BM_VDistributed)->Arg(4)->Arg(64);

}  // namespace
