#include "matterwave/random.hpp"

#include <cmath>

#include "matterwave/errors.hpp"

namespace matterwave {

double uniform_unit(RandomEngine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

namespace {

std::int64_t poisson_inversion(double mean, RandomEngine& engine) {
  double p = std::exp(-mean);
  double cumulative = p;
  const double u = uniform_unit(engine);
  std::int64_t k = 0;
  // Cap guards against cumulative rounding short of u; P(k > 200) is nil for mean < 10.
  while (u > cumulative && k < 200) {
    ++k;
    p *= mean / static_cast<double>(k);
    cumulative += p;
  }
  return k;
}

// W. Hormann, "The transformed rejection method for generating Poisson
// random variables", Insurance: Mathematics and Economics 12 (1993).
std::int64_t poisson_ptrs(double mean, RandomEngine& engine) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform_unit(engine) - 0.5;
    const double v = uniform_unit(engine);
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::int64_t>(k);
    }
    if (k < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
    const double rhs = -mean + k * loglam - std::lgamma(k + 1.0);
    if (lhs <= rhs) {
      return static_cast<std::int64_t>(k);
    }
  }
}

}  // namespace

std::int64_t sample_poisson(double mean, RandomEngine& engine) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("Poisson mean must be finite and non-negative");
  }
  if (mean == 0.0) {
    return 0;
  }
  if (mean < 10.0) {
    return poisson_inversion(mean, engine);
  }
  return poisson_ptrs(mean, engine);
}

}  // namespace matterwave
