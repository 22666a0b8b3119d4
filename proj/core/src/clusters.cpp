#include <cmath>

#include "matterwave/analysis.hpp"
#include "matterwave/errors.hpp"

namespace matterwave {

AssignmentReport assign_clusters(std::span<const double> peak_angles, double reference_first_order,
                                 const AssignmentSettings& settings) {
  if (!(reference_first_order > 0.0) || !std::isfinite(reference_first_order)) {
    throw DomainError("cluster assignment: reference angle must be positive");
  }
  if (settings.max_cluster < 1 || settings.max_order < 1) {
    throw DomainError("cluster assignment: max_cluster and max_order must be >= 1");
  }
  if (!(settings.tolerance > 0.0)) {
    throw DomainError("cluster assignment: tolerance must be positive");
  }

  AssignmentReport report;
  for (const double angle : peak_angles) {
    if (!std::isfinite(angle) || !(angle > 0.0)) {
      report.unassigned_angles.push_back(angle);
      continue;
    }
    const double ratio = angle / reference_first_order;
    ClusterAssignment best{angle, 0, 0, INFINITY};
    // Ascending N then n with strict improvement keeps the smallest (N, n) on ties.
    for (int size = 1; size <= settings.max_cluster; ++size) {
      for (int order = 1; order <= settings.max_order; ++order) {
        const double residual = std::abs(ratio - static_cast<double>(order) / static_cast<double>(size));
        if (residual < best.relative_residual) {
          best = {angle, size, order, residual};
        }
      }
    }
    if (best.relative_residual <= settings.tolerance) {
      report.assigned.push_back(best);
    } else {
      report.unassigned_angles.push_back(angle);
    }
  }
  return report;
}

}  // namespace matterwave
