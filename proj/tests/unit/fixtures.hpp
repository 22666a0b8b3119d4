#pragma once

#include <cmath>
#include <vector>

#include "matterwave/constants.hpp"
#include "matterwave/diffraction.hpp"
#include "matterwave/synthesis.hpp"

namespace matterwave::testing {

inline constexpr double nm = constants::nanometre;
inline constexpr double mrad = constants::milliradian;

inline Grating standard_grating() { return Grating(100 * nm, 71.2 * nm, 200); }

/// +-8 mrad in 0.01 mrad bins with 0.1 mrad resolution: covers |n| <= 7 of
/// helium at 1000 m/s with ~6 bins per FWHM.
inline DetectorConfig standard_detector(double exposure = 1e5) {
  return {-8.0 * mrad, 8.0 * mrad, 1601, 0.1 * mrad, exposure};
}

inline QuantumPeakParams reference_params() { return {60 * nm, 5 * nm, 3 * nm, 1.0}; }

inline std::vector<MixtureComponent> helium_only(const QuantumPeakParams& p = reference_params()) {
  return {{helium4(), 1.0, p}};
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace matterwave::testing
