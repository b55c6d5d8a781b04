#include <benchmark/benchmark.h>

#include "drams/channel.hpp"
#include "drams/experiments.hpp"
#include "drams/topology.hpp"

namespace {

using namespace drams;

void BM_HalfCircleScan(benchmark::State& state) {
  TopologySpec spec;
  spec.iu_count = static_cast<std::size_t>(state.range(0));
  const Topology topo = generate_topology(spec, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(half_circle_scan(topo, topo.source().position, topo.destination().position,
                                              kIuMask | kRisMask));
  }
}
BENCHMARK(BM_HalfCircleScan)->Arg(100)->Arg(400)->Arg(1200);

void BM_AlignDoubleReflection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const FadingVector in = sample_fading(n, 10.0, rng);
  const FadingVector out = sample_fading(n, 10.0, rng);
  const FadingMatrix mid = sample_fading_matrix(n, n, 10.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(align_double_reflection(in, mid, out));
}
BENCHMARK(BM_AlignDoubleReflection)->Arg(32)->Arg(250);

void BM_FiniteBlocklengthRate(benchmark::State& state) {
  double gamma = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(finite_blocklength_rate(gamma, 1000.0, 1e-4));
    gamma = gamma < 1e3 ? gamma * 1.01 : 0.5;
  }
}
BENCHMARK(BM_FiniteBlocklengthRate);

void BM_Replication(benchmark::State& state) {
  SimConfig config;
  config.iu_count = static_cast<int>(state.range(0));
  config.coverage_m = static_cast<double>(state.range(1));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(config, replication_seed(config.seed, i++)));
}
BENCHMARK(BM_Replication)->Args({100, 30})->Args({400, 60})->Args({900, 90})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
