#include "matterwave/diffraction.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "matterwave/constants.hpp"
#include "matterwave/errors.hpp"

namespace matterwave {

namespace {

using constants::pi;

// Distance from a removable singularity below which the series is used.
constexpr double kSeriesThreshold = 1e-8;
// Above this |b| the contrast term is evaluated in the log domain.
constexpr double kLogDomainThreshold = 20.0;
constexpr double kSinhOverflowLimit = 700.0;

// (sin x / x)^2 with the fourth-order expansion near x = 0.
double sinc_squared(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 45.0;
  }
  const double ratio = std::sin(x) / x;
  return ratio * ratio;
}

// [sin(N x) / sin(x)]^2 where x = pi * u. The phase is first reduced to the
// offset from the nearest principal maximum; the sign flip picked up in that
// reduction disappears on squaring.
double grating_factor(double u, int num_slits) {
  const double n = static_cast<double>(num_slits);
  const double offset = pi * (u - std::round(u));
  if (std::abs(offset) < kSeriesThreshold) {
    const double e2 = offset * offset;
    const double n2 = n * n;
    const double ratio =
        n * (1.0 - (n2 - 1.0) * e2 / 6.0 + (3.0 * n2 * n2 - 10.0 * n2 + 7.0) * e2 * e2 / 360.0);
    return ratio * ratio;
  }
  const double ratio = std::sin(n * offset) / std::sin(offset);
  return ratio * ratio;
}

struct BracketTerms {
  double value;  // [sin^2 a + sinh^2 b] / (a^2 + b^2)
  double d_a;
  double d_b;
  double d_b2;  // derivative with respect to b^2
};

// log of the bracket and its logarithmic derivatives for large |b|.
struct LogBracketTerms {
  double log_value;
  double dlog_a;
  double dlog_b;
  double dlog_b2;
};

BracketTerms bracket(double a, double b) {
  if (b == 0.0) {
    const double value = sinc_squared(a);
    const double d_a = std::abs(a) < kSeriesThreshold
                           ? -2.0 * a / 3.0
                           : (std::sin(2.0 * a) - 2.0 * a * value) / (a * a);
    // d sinh^2(b) / d(b^2) -> 1 as b -> 0
    return {value, d_a, 0.0, (1.0 - value) / (a * a)};
  }
  const double sa = std::sin(a);
  const double sb = std::sinh(b);
  const double denom = a * a + b * b;
  const double value = (sa * sa + sb * sb) / denom;
  const double two_b = 2.0 * b;
  const double sinh_ratio =
      std::abs(two_b) < 1e-4 ? 1.0 + two_b * two_b / 6.0 : std::sinh(two_b) / two_b;
  return {value, (std::sin(2.0 * a) - 2.0 * a * value) / denom,
          (std::sinh(2.0 * b) - 2.0 * b * value) / denom, (sinh_ratio - value) / denom};
}

LogBracketTerms log_bracket(double a, double b) {
  const double ab = std::abs(b);
  const double sa = std::sin(a);
  // sinh^2 b = e^{2|b|} (1 - e^{-2|b|})^2 / 4
  const double tail = std::exp(-2.0 * ab);
  const double log_sinh2 = 2.0 * ab - 2.0 * std::log(2.0) + 2.0 * std::log1p(-tail);
  const double ratio = sa * sa * std::exp(-log_sinh2);  // sin^2 a / sinh^2 b
  const double denom = a * a + b * b;
  const double log_value = log_sinh2 + std::log1p(ratio) - std::log(denom);
  const double num_inv = std::exp(-log_sinh2) / (1.0 + ratio);  // 1 / (sin^2 a + sinh^2 b)
  const double coth = 1.0 / std::tanh(b);
  const double dlog_b = 2.0 * coth / (1.0 + ratio) - 2.0 * b / denom;
  return {log_value, std::sin(2.0 * a) * num_inv - 2.0 * a / denom, dlog_b, dlog_b / (2.0 * b)};
}

}  // namespace

Grating::Grating(double period, double slit_width, int num_slits)
    : period_(period), slit_width_(slit_width), num_slits_(num_slits) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("grating period must be positive and finite");
  }
  if (!(slit_width > 0.0) || !(slit_width < period)) {
    throw DomainError("grating slit width must satisfy 0 < s < d");
  }
  if (num_slits < 1) {
    throw DomainError("grating must have at least one slit");
  }
}

Species::Species(std::string name, double mass, int cluster_size)
    : name_(std::move(name)), mass_(mass), cluster_size_(cluster_size) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("species '" + name_ + "': mass must be positive");
  }
  if (cluster_size < 1) {
    throw DomainError("species '" + name_ + "': cluster size must be >= 1");
  }
}

Species Species::cluster_of(const Species& monomer, int cluster_size) {
  if (cluster_size < 1) {
    throw DomainError("cluster size must be >= 1");
  }
  if (cluster_size == 1) {
    return monomer;
  }
  return Species(monomer.name() + std::to_string(cluster_size),
                 static_cast<double>(cluster_size) * monomer.mass(),
                 cluster_size * monomer.cluster_size());
}

Species helium4() { return Species("He", constants::helium4_mass, 1); }

BeamState::BeamState(Species species, double velocity)
    : species_(std::move(species)), velocity_(velocity) {
  wavelength_ = de_broglie_wavelength(species_.mass(), velocity_);
  wavenumber_ = 2.0 * pi / wavelength_;
}

void QuantumPeakParams::validate() const {
  if (!(s_eff > 0.0) || !std::isfinite(s_eff)) {
    throw DomainError("s_eff must be positive");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("delta must be non-negative");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be non-negative");
  }
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("amplitude must be positive");
  }
}

double de_broglie_wavelength(double mass, double velocity) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("de Broglie wavelength: mass must be positive");
  }
  if (!(velocity > 0.0) || !std::isfinite(velocity)) {
    throw DomainError("de Broglie wavelength: velocity must be positive");
  }
  return constants::planck_h / (mass * velocity);
}

std::vector<OrderAngle> diffraction_angles(double wavelength, const Grating& grating,
                                           int max_order) {
  if (!(wavelength > 0.0)) {
    throw DomainError("diffraction angles: wavelength must be positive");
  }
  if (max_order < 0) {
    throw DomainError("diffraction angles: max_order must be >= 0");
  }
  std::vector<OrderAngle> angles;
  angles.reserve(2 * static_cast<std::size_t>(max_order) + 1);
  for (int n = -max_order; n <= max_order; ++n) {
    const double sine = static_cast<double>(n) * wavelength / grating.period();
    if (std::abs(sine) <= 1.0) {
      angles.push_back({n, std::asin(sine)});
    }
  }
  return angles;
}

double grating_intensity(double theta, const Grating& grating, double wavenumber) {
  const double sine = std::sin(theta);
  const double u = grating.period() * wavenumber * sine / (2.0 * pi);
  const double slit_arg = 0.5 * grating.slit_width() * wavenumber * sine;
  return grating_factor(u, grating.num_slits()) * sinc_squared(slit_arg);
}

double slit_envelope(int n, double slit_width, double period) {
  if (!(period > 0.0)) {
    throw DomainError("slit envelope: period must be positive");
  }
  if (!(slit_width > 0.0) || !(slit_width < period)) {
    throw DomainError("slit envelope: slit width must satisfy 0 < s < d");
  }
  if (n == 0) {
    return 1.0;
  }
  return sinc_squared(static_cast<double>(n) * pi / period * slit_width);
}

QuantumIntensityGradient quantum_order_intensity_gradient(int n, const QuantumPeakParams& params,
                                                          double period) {
  if (!(period > 0.0)) {
    throw DomainError("quantum order intensity: period must be positive");
  }
  if (n == 0) {
    return {params.amplitude, 0.0, 0.0, 0.0, 1.0};
  }
  const double scale = static_cast<double>(n) * pi / period;
  const double a = scale * params.s_eff;
  const double b = scale * params.delta;
  if (std::abs(b) > kSinhOverflowLimit) {
    throw RangeError("quantum order intensity: |n pi delta / d| exceeds 700, sinh^2 overflows");
  }
  const double damping_rate = 2.0 * pi * static_cast<double>(n) / period;
  const double damping_exponent = -(damping_rate * params.sigma) * (damping_rate * params.sigma);
  const double d_exponent_d_sigma = -2.0 * damping_rate * damping_rate * params.sigma;

  QuantumIntensityGradient grad;
  if (std::abs(b) <= kLogDomainThreshold) {
    const BracketTerms br = bracket(a, b);
    const double damping = std::exp(damping_exponent);
    grad.value = params.amplitude * damping * br.value;
    grad.d_s_eff = params.amplitude * damping * br.d_a * scale;
    grad.d_delta = params.amplitude * damping * br.d_b * scale;
    grad.d_sigma = grad.value * d_exponent_d_sigma;
    grad.d_amplitude = damping * br.value;
    grad.d_delta_squared = params.amplitude * damping * br.d_b2 * scale * scale;
  } else {
    const LogBracketTerms lb = log_bracket(a, b);
    const double log_shape = damping_exponent + lb.log_value;
    const double shape = std::exp(log_shape);
    grad.value = params.amplitude * shape;
    if (!std::isfinite(grad.value)) {
      throw RangeError("quantum order intensity overflows for the given delta");
    }
    grad.d_s_eff = grad.value * lb.dlog_a * scale;
    grad.d_delta = grad.value * lb.dlog_b * scale;
    grad.d_sigma = grad.value * d_exponent_d_sigma;
    grad.d_amplitude = shape;
    grad.d_delta_squared = grad.value * lb.dlog_b2 * scale * scale;
  }
  grad.d_sigma_squared = -grad.value * damping_rate * damping_rate;
  return grad;
}

double quantum_order_intensity(int n, const QuantumPeakParams& params, double period) {
  params.validate();
  return quantum_order_intensity_gradient(n, params, period).value;
}

}  // namespace matterwave
