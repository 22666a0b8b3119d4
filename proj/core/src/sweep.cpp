#include <algorithm>
#include <cmath>

#include "matterwave/analysis.hpp"
#include "matterwave/errors.hpp"

namespace matterwave {

double SweepFit::model(double velocity) const { return intercept_s + slope_b / std::sqrt(velocity); }

SweepFit velocity_sweep_regression(std::span<const SweepPoint> points) {
  if (points.size() < 3) {
    throw InsufficientDataError("velocity sweep needs at least 3 points, got " +
                                std::to_string(points.size()));
  }
  std::size_t zero_uncertainties = 0;
  for (const auto& p : points) {
    if (!(p.velocity > 0.0) || !std::isfinite(p.velocity)) {
      throw DomainError("velocity sweep: velocities must be positive");
    }
    if (!(p.s_eff > 0.0) || !std::isfinite(p.s_eff)) {
      throw DomainError("velocity sweep: s_eff must be positive");
    }
    if (!(p.s_eff_uncertainty >= 0.0) || !std::isfinite(p.s_eff_uncertainty)) {
      throw DomainError("velocity sweep: uncertainties must be non-negative");
    }
    if (p.s_eff_uncertainty == 0.0) {
      ++zero_uncertainties;
    }
  }
  const bool unit_weights = zero_uncertainties == points.size();
  if (!unit_weights && zero_uncertainties > 0) {
    throw DomainError("velocity sweep: either all or none of the uncertainties may be zero");
  }

  const std::size_t n = points.size();
  std::vector<double> x(n);
  std::vector<double> w(n);
  double total_weight = 0.0;
  double x_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 1.0 / std::sqrt(points[i].velocity);
    w[i] = unit_weights ? 1.0 : 1.0 / (points[i].s_eff_uncertainty * points[i].s_eff_uncertainty);
    total_weight += w[i];
    x_mean += w[i] * x[i];
    y_mean += w[i] * points[i].s_eff;
  }
  x_mean /= total_weight;
  y_mean /= total_weight;

  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - x_mean;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * (points[i].s_eff - y_mean);
  }
  const bool all_equal = std::all_of(points.begin(), points.end(),
                                     [&](const SweepPoint& p) { return p.velocity == points[0].velocity; });
  if (all_equal || !(sxx > 0.0)) {
    throw InsufficientDataError("velocity sweep: all velocities are equal");
  }

  SweepFit fit;
  fit.unit_weights = unit_weights;
  fit.slope_b = sxy / sxx;
  fit.intercept_s = y_mean - fit.slope_b * x_mean;
  fit.residuals.resize(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = points[i].s_eff - (fit.intercept_s + fit.slope_b * x[i]);
    rss += w[i] * fit.residuals[i] * fit.residuals[i];
  }
  // Unit weights carry no error scale; use the residual variance instead.
  const double variance_scale = unit_weights ? rss / static_cast<double>(n - 2) : 1.0;
  fit.slope_uncertainty = std::sqrt(variance_scale / sxx);
  fit.intercept_uncertainty =
      std::sqrt(variance_scale * (1.0 / total_weight + x_mean * x_mean / sxx));
  fit.intercept_slope_covariance = -variance_scale * x_mean / sxx;
  return fit;
}

DimerResult dimer_mean_distance(std::span<const SweepPoint> atom_points,
                                std::span<const SweepPoint> dimer_points) {
  DimerResult result;
  for (const auto& atom : atom_points) {
    for (const auto& dimer : dimer_points) {
      const double scale = std::max(std::abs(atom.velocity), std::abs(dimer.velocity));
      if (std::abs(atom.velocity - dimer.velocity) <= 1e-6 * scale) {
        DimerPoint point;
        point.velocity = atom.velocity;
        point.r = 2.0 * (atom.s_eff - dimer.s_eff);
        point.r_uncertainty = 2.0 * std::hypot(atom.s_eff_uncertainty, dimer.s_eff_uncertainty);
        point.negative = point.r < 0.0;
        result.negative_count += point.negative ? 1 : 0;
        result.per_velocity.push_back(point);
        break;
      }
    }
  }
  if (result.per_velocity.empty()) {
    throw DomainError("dimer size: atom and dimer sweeps share no velocity");
  }

  bool weighted = true;
  for (const auto& p : result.per_velocity) {
    weighted = weighted && p.r_uncertainty > 0.0;
  }
  double sum_w = 0.0;
  double sum_wr = 0.0;
  double sum_var = 0.0;
  for (const auto& p : result.per_velocity) {
    const double w = weighted ? 1.0 / (p.r_uncertainty * p.r_uncertainty) : 1.0;
    sum_w += w;
    sum_wr += w * p.r;
    sum_var += p.r_uncertainty * p.r_uncertainty;
  }
  result.r_mean = sum_wr / sum_w;
  result.r_uncertainty = weighted ? 1.0 / std::sqrt(sum_w)
                                  : std::sqrt(sum_var) / static_cast<double>(result.per_velocity.size());
  return result;
}

}  // namespace matterwave
