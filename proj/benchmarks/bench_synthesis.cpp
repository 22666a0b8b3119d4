#include <benchmark/benchmark.h>

#include <vector>

#include "matterwave/synthesis.hpp"

using namespace matterwave;

static void BM_SynthesizeScan(benchmark::State& state) {
  const Grating grating(100e-9, 71.2e-9, 200);
  const DetectorConfig detector{-8e-3, 8e-3, static_cast<int>(state.range(0)), 0.1e-3, 1e5};
  const std::vector<MixtureComponent> mixture = {
      {helium4(), 0.9, {60e-9, 5e-9, 3e-9, 1.0}},
      {Species::cluster_of(helium4(), 2), 0.1, {57.5e-9, 5e-9, 3e-9, 1.0}}};
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_scan(mixture, 1000.0, grating, detector, seed++, true));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthesizeScan)->Arg(1601)->Arg(16001);
