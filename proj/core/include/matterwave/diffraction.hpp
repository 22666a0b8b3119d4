#pragma once

#include <string>
#include <vector>

namespace matterwave {

/// Transmission grating: `num_slits` slits of width `slit_width` repeated with
/// spacing `period`. Lengths in metres.
class Grating {
 public:
  /// Throws DomainError unless 0 < slit_width < period and num_slits >= 1.
  Grating(double period, double slit_width, int num_slits);

  double period() const noexcept { return period_; }
  double slit_width() const noexcept { return slit_width_; }
  int num_slits() const noexcept { return num_slits_; }

  friend bool operator==(const Grating&, const Grating&) = default;

 private:
  double period_;
  double slit_width_;
  int num_slits_;
};

/// A diffracting particle species. Clusters of a monomer carry
/// mass = cluster_size * monomer mass.
class Species {
 public:
  Species(std::string name, double mass, int cluster_size = 1);

  /// The N-mer of `monomer`, named e.g. "He2".
  static Species cluster_of(const Species& monomer, int cluster_size);

  const std::string& name() const noexcept { return name_; }
  double mass() const noexcept { return mass_; }
  int cluster_size() const noexcept { return cluster_size_; }

  friend bool operator==(const Species&, const Species&) = default;

 private:
  std::string name_;
  double mass_;
  int cluster_size_;
};

/// Helium-4 monomer with the library's fixed mass constant.
Species helium4();

/// A mono-energetic beam of one species.
class BeamState {
 public:
  BeamState(Species species, double velocity);

  const Species& species() const noexcept { return species_; }
  double velocity() const noexcept { return velocity_; }
  double wavelength() const noexcept { return wavelength_; }
  double wavenumber() const noexcept { return wavenumber_; }

 private:
  Species species_;
  double velocity_;
  double wavelength_;
  double wavenumber_;
};

/// Parameters of the quantum order-intensity law: effective slit width,
/// contrast length, damping length (all metres) and an overall scale.
struct QuantumPeakParams {
  double s_eff = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  double amplitude = 1.0;

  /// Throws DomainError unless s_eff > 0, delta >= 0, sigma >= 0, amplitude > 0.
  void validate() const;

  friend bool operator==(const QuantumPeakParams&, const QuantumPeakParams&) = default;
};

struct OrderAngle {
  int order = 0;
  double angle = 0.0;  // rad
};

/// lambda = h / (m v). Throws DomainError for non-positive mass or velocity.
double de_broglie_wavelength(double mass, double velocity);

/// Principal-maximum directions sin(theta_n) = n lambda / d for
/// n in [-max_order, max_order], ascending in n. Orders that would need
/// |sin theta| > 1 are left out.
std::vector<OrderAngle> diffraction_angles(double wavelength, const Grating& grating,
                                           int max_order);

/// Fraunhofer intensity of the grating at angle `theta` for a plane wave of
/// wavenumber k at normal incidence: grating function times slit function,
/// normalised so that theta = 0 gives N^2.
///
/// The grating factor is evaluated after reducing the phase to the nearest
/// principal maximum, and both factors switch to a fourth-order series when
/// their argument is within 1e-8 of a removable singularity, so the result is
/// finite on the whole |theta| <= pi/2 domain.
double grating_intensity(double theta, const Grating& grating, double wavenumber);

/// Single-slit envelope at the n-th principal maximum,
/// sin^2(n pi s/d) / (n pi s/d)^2, with value 1 at n = 0.
double slit_envelope(int n, double slit_width, double period);

/// Order intensity with effective slit width, contrast and damping terms:
///
///   A * exp(-(2 pi n sigma/d)^2) * [sin^2(a) + sinh^2(b)] / (a^2 + b^2),
///   a = n pi s_eff/d,  b = n pi delta/d.
///
/// Equals A at n = 0. Throws RangeError when |b| > 700 (sinh^2 overflow).
double quantum_order_intensity(int n, const QuantumPeakParams& params, double period);

/// Partial derivatives of quantum_order_intensity with respect to
/// (s_eff, delta, sigma, amplitude).
struct QuantumIntensityGradient {
  double value = 0.0;
  double d_s_eff = 0.0;
  double d_delta = 0.0;
  double d_sigma = 0.0;
  double d_amplitude = 0.0;
  /// With respect to delta^2 and sigma^2; finite at delta = 0 and sigma = 0.
  double d_delta_squared = 0.0;
  double d_sigma_squared = 0.0;
};

QuantumIntensityGradient quantum_order_intensity_gradient(int n, const QuantumPeakParams& params,
                                                          double period);

/// Brute-force reference for grating_intensity: explicit phasor sum over the
/// slits times a numerically integrated single-aperture amplitude, all in
/// extended precision. Shares no closed forms with grating_intensity; meant
/// as a test oracle.
double phasor_sum_reference(double theta, const Grating& grating, double wavenumber);

}  // namespace matterwave
