#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "matterwave/diffraction.hpp"
#include "matterwave/synthesis.hpp"

namespace matterwave {

// ---------------------------------------------------------------------------
// Order extraction

struct OrderIntensity {
  int order = 0;
  double intensity = 0.0;
  double uncertainty = 0.0;
  /// Integration window was cut at the midpoint to a neighbouring order.
  bool overlapped = false;
  /// Integration window extends past the scan edge.
  bool clipped = false;
};

struct ExtractionSettings {
  double fwhm = 0.0;              // rad, detector resolution
  double window_half_width = 3.0;  // in FWHM
  double background_per_bin = 0.0;
};

/// Integrates counts in +-window_half_width*FWHM around each expected order.
/// Intensity is the background-subtracted sum (floored at 0), uncertainty the
/// Poisson error sqrt(total counts in window). Windows that overlap the next
/// expected order are truncated at the midpoint and flagged. Orders whose
/// window lies entirely outside the scan are dropped.
std::vector<OrderIntensity> extract_order_intensities(const DetectorScan& scan,
                                                      std::span<const OrderAngle> expected,
                                                      const ExtractionSettings& settings);

// ---------------------------------------------------------------------------
// Order-intensity fit

struct FitSettings {
  int max_iterations = 200;
  double step_tolerance = 1e-10;
  double gradient_tolerance = 1e-18;  // relative to trace(J^T J); loose values stop short on small widths
  double optimality_tolerance = 1e-8;
  /// Floor applied to per-order uncertainties in the chi-square weights.
  double uncertainty_floor = 1.0;
  /// Order 0 pins the amplitude; without it s_eff and d - s_eff fit equally well.
  bool include_zeroth_order = true;
  /// Number of best grid points the descent is started from when no initial
  /// guess is given.
  int grid_starts = 5;
};

/// Parameter order in FitResult::covariance.
enum FitParameter : std::size_t { kSEff = 0, kDelta = 1, kSigma = 2, kAmplitude = 3 };

struct FitResult {
  QuantumPeakParams params;
  std::array<std::array<double, 4>, 4> covariance{};
  double residual_norm = 0.0;  // sqrt(chi-square)
  double gradient_norm = 0.0;  // |J^T r| in normalised parameters
  double curvature_scale = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<int> orders_used;

  double uncertainty(FitParameter p) const;
};

/// Weighted chi-square of `params` against `orders`, with the same weighting
/// and order selection as fit_order_intensities.
double fit_objective(std::span<const OrderIntensity> orders, const QuantumPeakParams& params,
                     double period, const FitSettings& settings = {});

/// Damped least-squares fit of (s_eff, delta, sigma, amplitude) to measured
/// order intensities. Throws InsufficientDataError when fewer than four
/// distinct |n| with positive intensity are usable. A run that hits the
/// iteration cap is returned with converged = false.
FitResult fit_order_intensities(std::span<const OrderIntensity> orders, double period,
                                std::optional<QuantumPeakParams> initial_guess,
                                const FitSettings& settings = {});

// ---------------------------------------------------------------------------
// Velocity sweep

struct SweepPoint {
  double velocity = 0.0;           // m/s
  double s_eff = 0.0;              // m
  double s_eff_uncertainty = 0.0;  // m
};

struct SweepFit {
  double intercept_s = 0.0;  // m, geometric slit width
  double slope_b = 0.0;      // m (m/s)^(1/2)
  double intercept_uncertainty = 0.0;
  double slope_uncertainty = 0.0;
  double intercept_slope_covariance = 0.0;
  std::vector<double> residuals;  // m, s_eff - model per point, input order
  bool unit_weights = false;

  double model(double velocity) const;
};

/// Weighted straight-line fit of s_eff against 1/sqrt(v).
SweepFit velocity_sweep_regression(std::span<const SweepPoint> points);

// ---------------------------------------------------------------------------
// Dimer size

struct DimerPoint {
  double velocity = 0.0;
  double r = 0.0;  // m
  double r_uncertainty = 0.0;
  bool negative = false;
};

struct DimerResult {
  double r_mean = 0.0;  // m
  double r_uncertainty = 0.0;
  std::vector<DimerPoint> per_velocity;
  std::size_t negative_count = 0;
};

/// r(v) = 2 (s_eff_atom(v) - s_eff_dimer(v)) at every velocity present in both
/// lists (matched to 1e-6 relative), combined by inverse-variance weighting.
DimerResult dimer_mean_distance(std::span<const SweepPoint> atom_points,
                                std::span<const SweepPoint> dimer_points);

// ---------------------------------------------------------------------------
// Cluster assignment

struct ClusterAssignment {
  double peak_angle = 0.0;
  int cluster_size = 0;
  int order = 0;
  double relative_residual = 0.0;
};

struct AssignmentSettings {
  int max_cluster = 26;
  int max_order = 7;
  double tolerance = 1e-3;
};

struct AssignmentReport {
  std::vector<ClusterAssignment> assigned;
  std::vector<double> unassigned_angles;
};

/// Matches every peak to the (N, n) minimising |theta - (n/N) theta_ref| / theta_ref
/// over 1 <= N <= max_cluster, 1 <= n <= max_order, ties going to the smaller N
/// then the smaller n. Peaks whose best residual exceeds the tolerance are
/// reported as unassigned.
AssignmentReport assign_clusters(std::span<const double> peak_angles, double reference_first_order,
                                 const AssignmentSettings& settings);

/// Local maxima of a scan at |theta| > min_angle with at least min_counts,
/// separated by more than one FWHM. Positions are refined by a parabola fit
/// to log counts within +-FWHM/2 (exact for Gaussian peaks), or the
/// count-weighted centroid when that fit has no interior maximum. Ascending
/// angle.
std::vector<double> find_peaks(const DetectorScan& scan, double fwhm, double min_counts,
                               double min_angle);

}  // namespace matterwave
