#include <benchmark/benchmark.h>

#include "matterwave/diffraction.hpp"

using namespace matterwave;

static void BM_GratingIntensity(benchmark::State& state) {
  const Grating grating(100e-9, 71.2e-9, static_cast<int>(state.range(0)));
  const BeamState beam(helium4(), 1000.0);
  double theta = -8e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grating_intensity(theta, grating, beam.wavenumber()));
    theta += 1e-7;
    if (theta > 8e-3) theta = -8e-3;
  }
}
BENCHMARK(BM_GratingIntensity)->Arg(10)->Arg(200)->Arg(100000);

static void BM_PhasorSumReference(benchmark::State& state) {
  const Grating grating(100e-9, 71.2e-9, 200);
  const BeamState beam(helium4(), 1000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(phasor_sum_reference(1.234e-3, grating, beam.wavenumber()));
  }
}
BENCHMARK(BM_PhasorSumReference)->Unit(benchmark::kMillisecond);

static void BM_QuantumOrderIntensityGradient(benchmark::State& state) {
  const QuantumPeakParams params{60e-9, 5e-9, 3e-9, 1.0};
  int n = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantum_order_intensity_gradient(n, params, 100e-9));
    n = n % 7 + 1;
  }
}
BENCHMARK(BM_QuantumOrderIntensityGradient);
