#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "matterwave/diffraction.hpp"

namespace matterwave {

namespace {

using Real = long double;

constexpr int kGaussOrder = 10;
constexpr int kMinPanels = 1000;
// Largest phase advance of exp(i kappa y) across one quadrature panel.
constexpr Real kMaxPanelPhase = 0.5L;

struct GaussLegendre {
  std::array<Real, kGaussOrder> nodes{};
  std::array<Real, kGaussOrder> weights{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
GaussLegendre make_gauss_legendre() {
  GaussLegendre rule;
  const Real pi = std::numbers::pi_v<Real>;
  for (int i = 0; i < kGaussOrder; ++i) {
    Real x = std::cos(pi * (static_cast<Real>(i) + 0.75L) / (static_cast<Real>(kGaussOrder) + 0.5L));
    Real derivative = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1.0L;
      Real p1 = x;
      for (int k = 2; k <= kGaussOrder; ++k) {
        const Real p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = kGaussOrder * (x * p1 - p0) / (x * x - 1.0L);
      const Real step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-19L) {
        break;
      }
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0L / ((1.0L - x * x) * derivative * derivative);
  }
  return rule;
}

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = make_gauss_legendre();
  return rule;
}

// (1/s) * integral_0^s exp(i kappa y) dy by composite Gauss-Legendre.
std::complex<Real> aperture_amplitude(Real kappa, Real width) {
  const GaussLegendre& rule = gauss_legendre();
  const Real total_phase = std::abs(kappa) * width;
  const int panels = std::max(kMinPanels, static_cast<int>(std::ceil(total_phase / kMaxPanelPhase)));
  const Real h = width / panels;
  std::complex<Real> sum{0.0L, 0.0L};
  for (int p = 0; p < panels; ++p) {
    const Real mid = (static_cast<Real>(p) + 0.5L) * h;
    for (int i = 0; i < kGaussOrder; ++i) {
      const Real y = mid + 0.5L * h * rule.nodes[static_cast<std::size_t>(i)];
      const Real w = 0.5L * h * rule.weights[static_cast<std::size_t>(i)];
      sum += w * std::complex<Real>(std::cos(kappa * y), std::sin(kappa * y));
    }
  }
  return sum / width;
}

}  // namespace

double phasor_sum_reference(double theta, const Grating& grating, double wavenumber) {
  const Real sine = std::sin(static_cast<Real>(theta));
  const Real kappa = static_cast<Real>(wavenumber) * sine;
  const Real slit_phase = static_cast<Real>(grating.period()) * kappa;

  std::complex<Real> slits{0.0L, 0.0L};
  for (int j = 0; j < grating.num_slits(); ++j) {
    const Real phase = static_cast<Real>(j) * slit_phase;
    slits += std::complex<Real>(std::cos(phase), std::sin(phase));
  }
  const std::complex<Real> aperture =
      aperture_amplitude(kappa, static_cast<Real>(grating.slit_width()));
  return static_cast<double>(std::norm(slits) * std::norm(aperture));
}

}  // namespace matterwave
