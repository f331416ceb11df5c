#include <benchmark/benchmark.h>

#include "quartz/random.hpp"
#include "quartz/sampling.hpp"

using namespace quartz;

namespace {

void BM_TauNiceDraw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto tau = static_cast<std::size_t>(state.range(1));
  const SamplingScheme scheme = SamplingScheme::tau_nice(n, tau);
  Sampler sampler(scheme);
  Rng rng = make_rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tau));
}
BENCHMARK(BM_TauNiceDraw)->Args({1 << 16, 1})->Args({1 << 16, 32})->Args({1 << 16, 1024});

void BM_DistributedDraw(benchmark::State& state) {
  const std::size_t n = 1 << 16;
  const auto nodes = static_cast<std::size_t>(state.range(0));
  const SamplingScheme scheme = SamplingScheme::distributed(n, nodes, 16);
  Sampler sampler(scheme);
  Rng rng = make_rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng));
}
BENCHMARK(BM_DistributedDraw)->Arg(4)->Arg(64);

void BM_ImportanceDraw(benchmark::State& state) {
  const std::size_t n = 1 << 16;
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<double>(i + 1);
  double total = 0.0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  Sampler sampler(SamplingScheme::serial(p));
  Rng rng = make_rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng));
}
BENCHMARK(BM_ImportanceDraw);

}  // namespace
