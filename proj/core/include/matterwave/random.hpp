#pragma once

#include <cstdint>
#include <random>

namespace matterwave {

/// Engine used for all synthetic noise. mt19937_64 output is fully specified
/// by the standard, so a seed gives the same stream on every platform.
using RandomEngine = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
double uniform_unit(RandomEngine& engine);

/// Poisson variate with the given mean. Uses sequential inversion for
/// mean < 10 and Hormann's transformed rejection (PTRS) above. Unlike
/// std::poisson_distribution the draw sequence is fixed by this code, not by
/// the standard library in use.
std::int64_t sample_poisson(double mean, RandomEngine& engine);

}  // namespace matterwave
