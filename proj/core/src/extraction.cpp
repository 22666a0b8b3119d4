#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "matterwave/analysis.hpp"
#include "matterwave/errors.hpp"

namespace matterwave {

std::vector<OrderIntensity> extract_order_intensities(const DetectorScan& scan,
                                                      std::span<const OrderAngle> expected,
                                                      const ExtractionSettings& settings) {
  scan.validate();
  if (!(settings.fwhm > 0.0)) {
    throw DomainError("extraction: FWHM must be positive");
  }
  if (!(settings.window_half_width > 0.0)) {
    throw DomainError("extraction: window half-width must be positive");
  }

  std::vector<std::size_t> by_angle(expected.size());
  std::iota(by_angle.begin(), by_angle.end(), std::size_t{0});
  std::stable_sort(by_angle.begin(), by_angle.end(), [&](std::size_t a, std::size_t b) {
    return expected[a].angle < expected[b].angle;
  });

  const double half = settings.window_half_width * settings.fwhm;
  const double half_bin = 0.5 * scan.bin_width();
  const double scan_lo = scan.bin_centers.front() - half_bin;
  const double scan_hi = scan.bin_centers.back() + half_bin;

  std::vector<std::optional<OrderIntensity>> extracted(expected.size());
  for (std::size_t rank = 0; rank < by_angle.size(); ++rank) {
    const OrderAngle& target = expected[by_angle[rank]];
    double lo = target.angle - half;
    double hi = target.angle + half;
    OrderIntensity out;
    out.order = target.order;
    if (rank > 0) {
      const double prev = expected[by_angle[rank - 1]].angle;
      if (target.angle - prev < 2.0 * half) {
        lo = std::max(lo, 0.5 * (prev + target.angle));
        out.overlapped = true;
      }
    }
    if (rank + 1 < by_angle.size()) {
      const double next = expected[by_angle[rank + 1]].angle;
      if (next - target.angle < 2.0 * half) {
        hi = std::min(hi, 0.5 * (next + target.angle));
        out.overlapped = true;
      }
    }
    if (hi < scan_lo || lo > scan_hi) {
      continue;
    }
    out.clipped = lo < scan_lo || hi > scan_hi;

    const auto first = std::lower_bound(scan.bin_centers.begin(), scan.bin_centers.end(), lo);
    const auto last = std::lower_bound(first, scan.bin_centers.end(), hi);
    double total = 0.0;
    std::size_t bins = 0;
    for (auto it = first; it != last; ++it) {
      total += static_cast<double>(
          scan.counts[static_cast<std::size_t>(it - scan.bin_centers.begin())]);
      ++bins;
    }
    out.intensity = std::max(0.0, total - settings.background_per_bin * static_cast<double>(bins));
    out.uncertainty = std::sqrt(total);
    extracted[by_angle[rank]] = out;
  }

  std::vector<OrderIntensity> result;
  result.reserve(expected.size());
  for (auto& item : extracted) {
    if (item) {
      result.push_back(*item);
    }
  }
  return result;
}

namespace {

// Vertex of a parabola fitted to log counts within +-reach bins of `i`, each bin
// weighted by its counts (the inverse variance of a Poisson log). Exact for a
// Gaussian peak; falls back to the count-weighted centroid when the fit does
// not give a maximum inside the window.
double refine_peak(const std::vector<double>& x, const std::vector<std::int64_t>& y, std::ptrdiff_t i,
                   std::ptrdiff_t reach, double step) {
  const auto size = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - reach);
  const std::ptrdiff_t hi = std::min(size - 1, i + reach);
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  double weight = 0.0;
  double moment = 0.0;
  int used = 0;
  for (std::ptrdiff_t j = lo; j <= hi; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double counts = static_cast<double>(y[uj]);
    weight += counts;
    moment += counts * x[uj];
    if (counts <= 0.0) continue;
    const double t = static_cast<double>(j - i);
    const Eigen::Vector3d basis(1.0, t, t * t);
    normal += counts * basis * basis.transpose();
    rhs += counts * std::log(counts) * basis;
    ++used;
  }
  const double centroid = moment / weight;
  if (used < 3) return centroid;
  const Eigen::Vector3d coef = normal.ldlt().solve(rhs);
  if (!(coef[2] < 0.0)) return centroid;
  const double offset = -coef[1] / (2.0 * coef[2]);
  if (!(std::abs(offset) <= static_cast<double>(reach))) return centroid;
  return x[static_cast<std::size_t>(i)] + offset * step;
}

}  // namespace

std::vector<double> find_peaks(const DetectorScan& scan, double fwhm, double min_counts,
                               double min_angle) {
  scan.validate();
  if (!(fwhm > 0.0)) {
    throw DomainError("peak finding: FWHM must be positive");
  }
  const auto& x = scan.bin_centers;
  const auto& y = scan.counts;
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(x.size());
  const double step = scan.bin_width();
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(fwhm / step));
  const auto centroid_reach = static_cast<std::ptrdiff_t>(std::floor(0.5 * fwhm / step));

  std::vector<double> peaks;
  for (std::ptrdiff_t i = 0; i < size; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (static_cast<double>(y[ui]) < min_counts || std::abs(x[ui]) <= min_angle) {
      continue;
    }
    bool is_max = true;
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - reach);
         j <= std::min(size - 1, i + reach) && is_max; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      // Plateaus resolve to their leftmost bin.
      if (j < i && y[uj] >= y[ui]) is_max = false;
      if (j > i && y[uj] > y[ui]) is_max = false;
    }
    if (!is_max) {
      continue;
    }
    peaks.push_back(refine_peak(x, y, i, centroid_reach, step));
  }
  return peaks;
}

}  // namespace matterwave
