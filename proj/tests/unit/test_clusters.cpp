#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "matterwave/analysis.hpp"
#include "matterwave/errors.hpp"

using namespace matterwave;
using namespace matterwave::testing;

namespace {

constexpr double theta_ref = 0.997 * mrad;

// Exhaustive reference with the same tie rule.
std::pair<int, int> brute_force(double ratio, const AssignmentSettings& s) {
  std::pair<int, int> best{0, 0};
  double best_residual = INFINITY;
  for (int big_n = 1; big_n <= s.max_cluster; ++big_n) {
    for (int n = 1; n <= s.max_order; ++n) {
      const double r = std::abs(ratio - static_cast<double>(n) / big_n);
      if (r < best_residual) {
        best_residual = r;
        best = {big_n, n};
      }
    }
  }
  return best_residual <= s.tolerance ? best : std::pair<int, int>{0, 0};
}

}  // namespace

TEST_CASE("first orders of He_1 to He_26 are identified") {
  std::vector<double> peaks;
  for (int n = 1; n <= 26; ++n) peaks.push_back(theta_ref / n);
  const AssignmentReport report = assign_clusters(peaks, theta_ref, {});
  REQUIRE(report.assigned.size() == 26);
  CHECK(report.unassigned_angles.empty());
  for (int n = 1; n <= 26; ++n) {
    const auto& a = report.assigned[static_cast<std::size_t>(n - 1)];
    CHECK(a.cluster_size == n);
    CHECK(a.order == 1);
  }
}

TEST_CASE("half angle is the dimer, reference angle the atom") {
  const double peaks[] = {theta_ref / 2.0, theta_ref};
  const AssignmentReport report = assign_clusters(peaks, theta_ref, {});
  REQUIRE(report.assigned.size() == 2);
  CHECK(report.assigned[0].cluster_size == 2);
  CHECK(report.assigned[0].order == 1);
  CHECK(report.assigned[1].cluster_size == 1);
  CHECK(report.assigned[1].order == 1);
  // 2 theta_ref is He order 2 rather than He_2 order 4.
  const double second[] = {2.0 * theta_ref};
  const auto r2 = assign_clusters(second, theta_ref, {});
  CHECK(r2.assigned[0].cluster_size == 1);
  CHECK(r2.assigned[0].order == 2);
}

TEST_CASE("assignment matches exhaustive search") {
  const AssignmentSettings settings;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ratio(0.02, 7.5);
  std::vector<double> peaks = {0.77 * theta_ref};
  for (int i = 0; i < 500; ++i) peaks.push_back(ratio(rng) * theta_ref);
  const AssignmentReport report = assign_clusters(peaks, theta_ref, settings);
  CHECK(report.assigned.size() + report.unassigned_angles.size() == peaks.size());
  std::size_t next = 0;
  for (double p : peaks) {
    const auto expected = brute_force(p / theta_ref, settings);
    if (expected.first == 0) continue;
    REQUIRE(next < report.assigned.size());
    const auto& a = report.assigned[next++];
    CHECK(a.peak_angle == p);
    CHECK(a.cluster_size == expected.first);
    CHECK(a.order == expected.second);
  }
  CHECK(next == report.assigned.size());
}

TEST_CASE("assignment is scale invariant") {
  std::vector<double> peaks;
  for (int n = 1; n <= 26; ++n) peaks.push_back(theta_ref / n);
  peaks.push_back(0.77 * theta_ref);
  peaks.push_back(3.0 * theta_ref / 7.0);
  const AssignmentReport base = assign_clusters(peaks, theta_ref, {});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> log_scale(-6.0, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double c = std::exp(log_scale(rng));
    std::vector<double> scaled;
    for (double p : peaks) scaled.push_back(c * p);
    const AssignmentReport r = assign_clusters(scaled, c * theta_ref, {});
    REQUIRE(r.assigned.size() == base.assigned.size());
    for (std::size_t i = 0; i < r.assigned.size(); ++i) {
      CHECK(r.assigned[i].cluster_size == base.assigned[i].cluster_size);
      CHECK(r.assigned[i].order == base.assigned[i].order);
    }
  }
}

TEST_CASE("peaks far from any ratio are unassigned") {
  AssignmentSettings tight;
  tight.max_cluster = 3;
  tight.max_order = 2;
  const double peaks[] = {0.9 * theta_ref, -theta_ref};
  const AssignmentReport report = assign_clusters(peaks, theta_ref, tight);
  CHECK(report.assigned.empty());
  CHECK(report.unassigned_angles.size() == 2);
  CHECK_THROWS_AS(assign_clusters(peaks, 0.0, tight), DomainError);
}
