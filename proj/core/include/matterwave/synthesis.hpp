#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matterwave/diffraction.hpp"

namespace matterwave {

/// Angle-scanning detector. Bins are centred on an inclusive uniform grid from
/// angle_min to angle_max.
struct DetectorConfig {
  double angle_min = 0.0;  // rad
  double angle_max = 0.0;  // rad
  int num_bins = 0;
  double angular_resolution_fwhm = 0.0;  // rad
  /// Expected counts at the maximum of a unit-amplitude zeroth-order peak.
  double exposure_scale = 0.0;

  void validate() const;
  double bin_width() const;
  std::vector<double> bin_centers() const;
};

struct MixtureComponent {
  Species species;
  double relative_abundance = 1.0;
  QuantumPeakParams peak_params;
};

/// Throws DomainError on an empty mixture, negative abundances, abundances not
/// summing to 1 within 1e-9, or invalid peak parameters.
void validate_mixture(std::span<const MixtureComponent> mixture);

struct ScanMetadata {
  std::optional<double> velocity;  // m/s
  std::optional<Grating> grating;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> species;
  bool synthetic = false;
};

struct DetectorScan {
  std::vector<double> bin_centers;  // rad, strictly increasing, uniform
  std::vector<std::int64_t> counts;
  ScanMetadata metadata;

  void validate() const;
  double bin_width() const;
};

/// Noise-free detector signal: a Gaussian of the detector FWHM for every
/// (component, order) whose centre sin(theta_n) = n lambda/d lies within six
/// FWHM of the window, with peak height
///   exposure_scale * abundance * quantum_order_intensity(n).
/// Peak areas are therefore proportional to abundance times order intensity.
std::vector<double> expected_signal(std::span<const MixtureComponent> mixture,
                                    double beam_velocity, const Grating& grating,
                                    const DetectorConfig& detector);

/// Expected signal of one component at full abundance.
std::vector<double> component_signal(const MixtureComponent& component, double beam_velocity,
                                     const Grating& grating, const DetectorConfig& detector);

/// Detector scan drawn from expected_signal. With `noise` each bin is an
/// independent Poisson draw from an mt19937_64 seeded with `seed`, bins in
/// ascending angle order; otherwise the expected values are rounded to the
/// nearest integer.
DetectorScan synthesize_scan(std::span<const MixtureComponent> mixture, double beam_velocity,
                             const Grating& grating, const DetectorConfig& detector,
                             std::uint64_t seed, bool noise);

}  // namespace matterwave
