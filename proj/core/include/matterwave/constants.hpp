#pragma once

#include <numbers>

namespace matterwave::constants {

/// Planck constant [J s] (exact, SI 2019).
inline constexpr double planck_h = 6.62607015e-34;

/// Mass of a 4He atom [kg].
inline constexpr double helium4_mass = 6.6465e-27;

inline constexpr double pi = std::numbers::pi;

inline constexpr double nanometre = 1e-9;
inline constexpr double angstrom = 1e-10;
inline constexpr double milliradian = 1e-3;

}  // namespace matterwave::constants
