#include <benchmark/benchmark.h>

#include "quartz/problem.hpp"
#include "quartz/solver.hpp"
#include "quartz/synth.hpp"

using namespace quartz;

namespace {

ProblemInstance bench_problem() {
  SynthSpec spec;
  spec.n = 1 << 14;
  spec.d = 1 << 14;
  spec.density = 1e-3;
  spec.seed = 9;
  spec.normalize = true;
  return ProblemInstance(synth_instance(spec), LossModel(LossKind::smoothed_hinge, 1.0),
                         1.0 / static_cast<double>(1 << 14));
}

// Cost per iteration should track the nonzeros of the sampled columns, not d.
void BM_SolverStep(benchmark::State& state) {
  static const ProblemInstance prob = bench_problem();
  const auto tau = static_cast<std::size_t>(state.range(0));
  SolverConfig cfg(SamplingScheme::tau_nice(prob.n(), tau));
  cfg.option = state.range(1) == 1 ? DualOption::I : DualOption::II;
  cfg.seed = 1;
  QuartzSolver solver(prob, cfg);
  for (auto _ : state) solver.step();
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tau));
}
BENCHMARK(BM_SolverStep)->Args({1, 1})->Args({1, 2})->Args({32, 1})->Args({32, 2});

void BM_Checkpoint(benchmark::State& state) {
  static const ProblemInstance prob = bench_problem();
  QuartzSolver solver(prob, SolverConfig(SamplingScheme::serial_uniform(prob.n())));
  for (auto _ : state) benchmark::DoNotOptimize(solver.checkpoint().gap);
}
BENCHMARK(BM_Checkpoint);

}  // namespace
