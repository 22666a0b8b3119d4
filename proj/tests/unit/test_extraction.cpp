#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "matterwave/analysis.hpp"
#include "matterwave/errors.hpp"

using namespace matterwave;
using namespace matterwave::testing;

namespace {

constexpr double velocity = 1000.0;

std::vector<OrderAngle> helium_orders(const Grating& g, int max_order, int cluster = 1) {
  const double lambda = de_broglie_wavelength(cluster * constants::helium4_mass, velocity);
  return diffraction_angles(lambda, g, max_order);
}

const OrderIntensity& find_order(const std::vector<OrderIntensity>& orders, int n) {
  const auto it = std::find_if(orders.begin(), orders.end(), [n](const OrderIntensity& o) { return o.order == n; });
  REQUIRE(it != orders.end());
  return *it;
}

}  // namespace

TEST_CASE("empty scan gives zero intensities") {
  const DetectorConfig det = standard_detector();
  DetectorScan scan;
  scan.bin_centers = det.bin_centers();
  scan.counts.assign(scan.bin_centers.size(), 0);
  const auto orders = extract_order_intensities(scan, helium_orders(standard_grating(), 7), {det.angular_resolution_fwhm});
  REQUIRE(orders.size() == 15);
  for (const auto& o : orders) {
    CHECK(o.intensity == 0.0);
    CHECK(o.uncertainty == 0.0);
    CHECK_FALSE(o.overlapped);
    CHECK_FALSE(o.clipped);
  }
}

TEST_CASE("noiseless scan reproduces order-intensity ratios") {
  const Grating g = standard_grating();
  const DetectorConfig det = standard_detector(1e7);
  const QuantumPeakParams p = reference_params();
  const DetectorScan scan = synthesize_scan(helium_only(p), velocity, g, det, 1, false);
  const auto orders = extract_order_intensities(scan, helium_orders(g, 7), {det.angular_resolution_fwhm});
  const double i0 = find_order(orders, 0).intensity;
  const double q0 = quantum_order_intensity(0, p, g.period());
  for (const auto& o : orders) {
    const double expected = quantum_order_intensity(o.order, p, g.period()) / q0;
    CHECK(std::abs(o.intensity / i0 - expected) <= 1e-3 * expected + 1e-6);
    CHECK(o.uncertainty == doctest::Approx(std::sqrt(o.intensity)));
  }
}

TEST_CASE("dimer orders at half the atomic angles are extracted") {
  const Grating g = standard_grating();
  const DetectorConfig det = standard_detector(1e7);
  const QuantumPeakParams p = reference_params();
  const Species dimer = Species::cluster_of(helium4(), 2);
  const std::vector<MixtureComponent> mixture = {{helium4(), 0.9, p}, {dimer, 0.1, p}};
  const DetectorScan scan = synthesize_scan(mixture, velocity, g, det, 1, false);
  const auto dimer_orders = extract_order_intensities(scan, helium_orders(g, 13, 2), {det.angular_resolution_fwhm});
  const auto atom_orders = extract_order_intensities(scan, helium_orders(g, 7), {det.angular_resolution_fwhm});
  // Odd dimer orders sit between atomic orders and carry only the dimer signal.
  const double atom_0 = find_order(atom_orders, 0).intensity;
  const double q0 = quantum_order_intensity(0, p, g.period());
  for (int n : {1, 3, 5}) {
    const double expected = 0.1 * quantum_order_intensity(n, p, g.period()) / q0;
    CHECK(find_order(dimer_orders, n).intensity / atom_0 == doctest::Approx(expected).epsilon(2e-3));
  }
}

TEST_CASE("neighbouring windows are split and flagged") {
  const Grating g = standard_grating();
  const DetectorConfig det = standard_detector();
  DetectorScan scan;
  scan.bin_centers = det.bin_centers();
  scan.counts.assign(scan.bin_centers.size(), 1);
  // First-order spacing is ~1 mrad; a 0.5 mrad resolution makes +-3 FWHM windows collide.
  const auto wide = extract_order_intensities(scan, helium_orders(g, 2), {0.5 * mrad});
  for (const auto& o : wide) {
    CHECK(o.overlapped);
  }
  // Split windows still partition the counts between adjacent orders.
  const auto narrow = extract_order_intensities(scan, helium_orders(g, 2), {0.1 * mrad});
  for (const auto& o : narrow) {
    CHECK_FALSE(o.overlapped);
    CHECK(o.intensity == doctest::Approx(60.0).epsilon(0.05));
  }
}

TEST_CASE("scan edges clip or drop orders") {
  const Grating g = standard_grating();
  const DetectorConfig det{-3.0 * mrad, 3.0 * mrad, 601, 0.1 * mrad, 1e5};
  DetectorScan scan;
  scan.bin_centers = det.bin_centers();
  scan.counts.assign(scan.bin_centers.size(), 0);
  const auto orders = extract_order_intensities(scan, helium_orders(g, 7), {det.angular_resolution_fwhm});
  // |n| = 3 sits at ~2.99 mrad, so its window hangs over the edge; higher orders are gone.
  REQUIRE(orders.size() == 7);
  CHECK(find_order(orders, 3).clipped);
  CHECK(find_order(orders, -3).clipped);
  CHECK_FALSE(find_order(orders, 2).clipped);
}

TEST_CASE("background is subtracted and floored") {
  const DetectorConfig det = standard_detector();
  DetectorScan scan;
  scan.bin_centers = det.bin_centers();
  scan.counts.assign(scan.bin_centers.size(), 4);
  ExtractionSettings settings{det.angular_resolution_fwhm};
  settings.background_per_bin = 4.0;
  for (const auto& o : extract_order_intensities(scan, helium_orders(standard_grating(), 3), settings)) {
    CHECK(o.intensity == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(o.uncertainty > 0.0);
  }
  settings.background_per_bin = 10.0;
  for (const auto& o : extract_order_intensities(scan, helium_orders(standard_grating(), 3), settings)) {
    CHECK(o.intensity == 0.0);
  }
}

TEST_CASE("peaks are found at the diffraction angles") {
  const Grating g = standard_grating();
  const DetectorConfig det = standard_detector();
  const DetectorScan scan = synthesize_scan(helium_only(), velocity, g, det, 1, false);
  std::vector<double> peaks;
  for (double a : find_peaks(scan, det.angular_resolution_fwhm, 50.0, 0.5 * mrad)) {
    if (std::abs(a) < 7.5 * mrad) peaks.push_back(a);  // order 8 is cut by the scan edge
  }
  std::vector<double> positive;
  for (const auto& o : helium_orders(g, 7)) {
    if (o.order != 0) positive.push_back(o.angle);
  }
  REQUIRE(peaks.size() == positive.size());
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    CHECK(std::abs(peaks[i] - positive[i]) <= 0.01 * mrad);
  }
}
