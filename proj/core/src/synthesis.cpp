#include "matterwave/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "matterwave/errors.hpp"
#include "matterwave/random.hpp"

namespace matterwave {

namespace {

// Peaks are evaluated out to this many Gaussian standard deviations.
constexpr double kPeakCutoffSigmas = 12.0;
constexpr double kPeakMarginFwhm = 6.0;

double fwhm_to_sigma(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }

void add_component(std::vector<double>& signal, std::span<const double> centers,
                   const MixtureComponent& component, double weight, double beam_velocity,
                   const Grating& grating, const DetectorConfig& detector) {
  const double wavelength = de_broglie_wavelength(component.species.mass(), beam_velocity);
  const double lo = std::max(-std::numbers::pi / 2,
                             detector.angle_min - kPeakMarginFwhm * detector.angular_resolution_fwhm);
  const double hi = std::min(std::numbers::pi / 2,
                             detector.angle_max + kPeakMarginFwhm * detector.angular_resolution_fwhm);
  const double n_lo = std::ceil(std::sin(lo) * grating.period() / wavelength);
  const double n_hi = std::floor(std::sin(hi) * grating.period() / wavelength);
  const double sigma = fwhm_to_sigma(detector.angular_resolution_fwhm);
  const double x0 = centers.front();
  const double step = detector.bin_width();

  for (double nd = n_lo; nd <= n_hi; nd += 1.0) {
    const int n = static_cast<int>(nd);
    const double sine = static_cast<double>(n) * wavelength / grating.period();
    if (std::abs(sine) > 1.0) {
      continue;
    }
    const double center = std::asin(sine);
    const double height =
        detector.exposure_scale * weight * quantum_order_intensity(n, component.peak_params,
                                                                   grating.period());
    const double reach = kPeakCutoffSigmas * sigma;
    const auto first = static_cast<std::ptrdiff_t>(std::max(0.0, std::floor((center - reach - x0) / step)));
    const auto last = std::min(static_cast<std::ptrdiff_t>(centers.size()) - 1,
                               static_cast<std::ptrdiff_t>(std::ceil((center + reach - x0) / step)));
    for (std::ptrdiff_t i = first; i <= last; ++i) {
      const double z = (centers[static_cast<std::size_t>(i)] - center) / sigma;
      signal[static_cast<std::size_t>(i)] += height * std::exp(-0.5 * z * z);
    }
  }
}

}  // namespace

void DetectorConfig::validate() const {
  if (!std::isfinite(angle_min) || !std::isfinite(angle_max) || !(angle_min < angle_max)) {
    throw DomainError("detector: angle_min must be below angle_max");
  }
  if (angle_min < -std::numbers::pi / 2 || angle_max > std::numbers::pi / 2) {
    throw DomainError("detector: angles must lie within [-pi/2, pi/2]");
  }
  if (num_bins < 2) {
    throw DomainError("detector: num_bins must be >= 2");
  }
  if (!(angular_resolution_fwhm > 0.0)) {
    throw DomainError("detector: angular_resolution_fwhm must be positive");
  }
  if (!(exposure_scale > 0.0) || !std::isfinite(exposure_scale)) {
    throw DomainError("detector: exposure_scale must be positive");
  }
}

double DetectorConfig::bin_width() const {
  return (angle_max - angle_min) / static_cast<double>(num_bins - 1);
}

std::vector<double> DetectorConfig::bin_centers() const {
  std::vector<double> centers(static_cast<std::size_t>(num_bins));
  const double step = bin_width();
  for (int i = 0; i < num_bins; ++i) {
    centers[static_cast<std::size_t>(i)] = angle_min + static_cast<double>(i) * step;
  }
  centers.back() = angle_max;
  return centers;
}

void validate_mixture(std::span<const MixtureComponent> mixture) {
  if (mixture.empty()) {
    throw DomainError("mixture must contain at least one component");
  }
  double total = 0.0;
  for (const auto& component : mixture) {
    if (!(component.relative_abundance >= 0.0)) {
      throw DomainError("mixture: abundance of '" + component.species.name() +
                        "' must be non-negative");
    }
    component.peak_params.validate();
    total += component.relative_abundance;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("mixture: abundances must sum to 1 (got " + std::to_string(total) + ")");
  }
}

void DetectorScan::validate() const {
  if (bin_centers.size() != counts.size()) {
    throw DomainError("scan: angle and count columns differ in length");
  }
  if (bin_centers.size() < 2) {
    throw DomainError("scan: at least two bins are required");
  }
  for (const auto c : counts) {
    if (c < 0) {
      throw DomainError("scan: counts must be non-negative");
    }
  }
  const double step = bin_width();
  if (!(step > 0.0)) {
    throw DomainError("scan: bin centres must be strictly increasing");
  }
  const double tolerance = 1e-9 * std::max(std::abs(bin_centers.front()), std::abs(bin_centers.back())) +
                           1e-9 * step;
  for (std::size_t i = 1; i < bin_centers.size(); ++i) {
    const double expected = bin_centers.front() + static_cast<double>(i) * step;
    if (!(bin_centers[i] > bin_centers[i - 1]) || std::abs(bin_centers[i] - expected) > tolerance) {
      throw DomainError("scan: bin centres must be strictly increasing and uniformly spaced");
    }
  }
}

double DetectorScan::bin_width() const {
  return (bin_centers.back() - bin_centers.front()) / static_cast<double>(bin_centers.size() - 1);
}

std::vector<double> component_signal(const MixtureComponent& component, double beam_velocity,
                                     const Grating& grating, const DetectorConfig& detector) {
  detector.validate();
  component.peak_params.validate();
  const std::vector<double> centers = detector.bin_centers();
  std::vector<double> signal(centers.size(), 0.0);
  add_component(signal, centers, component, 1.0, beam_velocity, grating, detector);
  return signal;
}

std::vector<double> expected_signal(std::span<const MixtureComponent> mixture,
                                    double beam_velocity, const Grating& grating,
                                    const DetectorConfig& detector) {
  validate_mixture(mixture);
  detector.validate();
  std::vector<double> signal(static_cast<std::size_t>(detector.num_bins), 0.0);
  for (const auto& component : mixture) {
    const std::vector<double> part = component_signal(component, beam_velocity, grating, detector);
    for (std::size_t i = 0; i < signal.size(); ++i) {
      signal[i] += component.relative_abundance * part[i];
    }
  }
  return signal;
}

DetectorScan synthesize_scan(std::span<const MixtureComponent> mixture, double beam_velocity,
                             const Grating& grating, const DetectorConfig& detector,
                             std::uint64_t seed, bool noise) {
  const std::vector<double> expected = expected_signal(mixture, beam_velocity, grating, detector);

  DetectorScan scan;
  scan.bin_centers = detector.bin_centers();
  scan.counts.resize(expected.size());
  if (noise) {
    RandomEngine engine(seed);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      scan.counts[i] = sample_poisson(expected[i], engine);
    }
  } else {
    for (std::size_t i = 0; i < expected.size(); ++i) {
      scan.counts[i] = std::llround(expected[i]);
    }
  }
  scan.metadata.velocity = beam_velocity;
  scan.metadata.grating = grating;
  scan.metadata.seed = seed;
  scan.metadata.species = mixture.front().species.name();
  scan.metadata.synthetic = true;
  return scan;
}

}  // namespace matterwave
