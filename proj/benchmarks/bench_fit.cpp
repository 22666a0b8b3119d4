#include <benchmark/benchmark.h>

#include <cmath>
#include <optional>
#include <vector>

#include "matterwave/analysis.hpp"

using namespace matterwave;

namespace {

std::vector<OrderIntensity> exact_orders(const QuantumPeakParams& truth, double period) {
  std::vector<OrderIntensity> orders;
  for (int n = -7; n <= 7; ++n) {
    const double value = 1e5 * quantum_order_intensity(n, truth, period);
    orders.push_back({n, value, std::sqrt(value)});
  }
  return orders;
}

const DetectorScan& noisy_scan() {
  static const DetectorScan scan = [] {
    const std::vector<MixtureComponent> mixture = {{helium4(), 1.0, {60e-9, 5e-9, 3e-9, 1.0}}};
    return synthesize_scan(mixture, 1000.0, Grating(100e-9, 71.2e-9, 200),
                           {-8e-3, 8e-3, 1601, 0.1e-3, 1e5}, 7, true);
  }();
  return scan;
}

}  // namespace

static void BM_FitFromGrid(benchmark::State& state) {
  const auto orders = exact_orders({60e-9, 5e-9, 3e-9, 1.0}, 100e-9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_order_intensities(orders, 100e-9, std::nullopt));
  }
}
BENCHMARK(BM_FitFromGrid)->Unit(benchmark::kMillisecond);

static void BM_FitFromGuess(benchmark::State& state) {
  const auto orders = exact_orders({60e-9, 5e-9, 3e-9, 1.0}, 100e-9);
  const QuantumPeakParams guess{55e-9, 8e-9, 2e-9, 1.2e5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_order_intensities(orders, 100e-9, guess));
  }
}
BENCHMARK(BM_FitFromGuess)->Unit(benchmark::kMicrosecond);

static void BM_ExtractOrders(benchmark::State& state) {
  const DetectorScan& scan = noisy_scan();
  const auto angles = diffraction_angles(de_broglie_wavelength(helium4().mass(), 1000.0),
                                         Grating(100e-9, 71.2e-9, 200), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_order_intensities(scan, angles, {0.1e-3}));
  }
}
BENCHMARK(BM_ExtractOrders);

static void BM_FindPeaks(benchmark::State& state) {
  const DetectorScan& scan = noisy_scan();
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_peaks(scan, 0.1e-3, 50.0, 0.1e-3));
  }
}
BENCHMARK(BM_FindPeaks);

static void BM_SweepRegression(benchmark::State& state) {
  std::vector<SweepPoint> points;
  for (int i = 0; i < 8; ++i) {
    const double v = 650.0 + 150.0 * i;
    points.push_back({v, 71.2e-9 - 3.5e-7 / std::sqrt(v), 0.05e-9});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(velocity_sweep_regression(points));
  }
}
BENCHMARK(BM_SweepRegression);
