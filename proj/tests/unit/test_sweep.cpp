#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "matterwave/analysis.hpp"
#include "matterwave/errors.hpp"

using namespace matterwave;
using namespace matterwave::testing;

namespace {

constexpr double true_width = 71.2 * nm;
constexpr double k_coeff = 150.0 * nm;  // s_eff = s - K / sqrt(v), v in m/s

std::vector<SweepPoint> synthetic_sweep(double uncertainty = 0.0) {
  std::vector<SweepPoint> points;
  for (double v : {400.0, 550.0, 700.0, 900.0, 1100.0, 1400.0, 1800.0, 2300.0}) {
    points.push_back({v, true_width - k_coeff / std::sqrt(v), uncertainty});
  }
  return points;
}

}  // namespace

TEST_CASE("noiseless sweep recovers the slit width") {
  const SweepFit fit = velocity_sweep_regression(synthetic_sweep());
  CHECK(rel_diff(fit.intercept_s, true_width) <= 1e-12);
  CHECK(rel_diff(fit.slope_b, -k_coeff) <= 1e-12);
  CHECK(fit.unit_weights);
  for (double r : fit.residuals) {
    CHECK(std::abs(r) <= 1e-12 * true_width);
  }
  CHECK(fit.model(900.0) == doctest::Approx(true_width - k_coeff / 30.0).epsilon(1e-12));
}

TEST_CASE("constant s_eff gives zero slope") {
  std::vector<SweepPoint> points = synthetic_sweep(0.5 * nm);
  for (auto& p : points) p.s_eff = 65 * nm;
  const SweepFit fit = velocity_sweep_regression(points);
  CHECK(std::abs(fit.slope_b) <= 1e-12 * 65 * nm);
  CHECK(rel_diff(fit.intercept_s, 65 * nm) <= 1e-12);
}

TEST_CASE("halving one uncertainty weighs like four copies") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.3 * nm);
  std::vector<SweepPoint> points = synthetic_sweep(0.3 * nm);
  for (auto& p : points) p.s_eff += noise(rng);

  std::vector<SweepPoint> halved = points;
  halved[2].s_eff_uncertainty /= 2.0;
  std::vector<SweepPoint> copies = points;
  for (int i = 0; i < 3; ++i) copies.push_back(points[2]);

  const SweepFit a = velocity_sweep_regression(halved);
  const SweepFit b = velocity_sweep_regression(copies);
  CHECK(rel_diff(a.intercept_s, b.intercept_s) <= 1e-12);
  CHECK(rel_diff(a.slope_b, b.slope_b) <= 1e-12);
  CHECK(rel_diff(a.intercept_uncertainty, b.intercept_uncertainty) <= 1e-12);
  CHECK(rel_diff(a.slope_uncertainty, b.slope_uncertainty) <= 1e-12);
}

TEST_CASE("weighted residuals sum to zero") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<SweepPoint> points = synthetic_sweep();
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].s_eff_uncertainty = (0.2 + 0.1 * static_cast<double>(i)) * nm;
    points[i].s_eff += points[i].s_eff_uncertainty * noise(rng);
  }
  const SweepFit fit = velocity_sweep_regression(points);
  double weighted = 0.0;
  double weighted_x = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double w = 1.0 / (points[i].s_eff_uncertainty * points[i].s_eff_uncertainty);
    weighted += w * fit.residuals[i];
    weighted_x += w * fit.residuals[i] / std::sqrt(points[i].velocity);
  }
  CHECK(std::abs(weighted) * 0.2 * nm * 0.2 * nm <= 1e-9 * nm);
  CHECK(std::abs(weighted_x) * 0.2 * nm * 0.2 * nm <= 1e-9 * nm);
  CHECK_FALSE(fit.unit_weights);
  CHECK(fit.intercept_uncertainty > 0.0);
  CHECK(fit.intercept_slope_covariance < 0.0);  // all x = 1/sqrt(v) are positive
}

TEST_CASE("degenerate sweeps are rejected") {
  auto points = synthetic_sweep();
  points.resize(2);
  CHECK_THROWS_AS(velocity_sweep_regression(points), InsufficientDataError);

  auto same = synthetic_sweep();
  for (auto& p : same) p.velocity = 1000.0;
  CHECK_THROWS_AS(velocity_sweep_regression(same), InsufficientDataError);

  auto mixed = synthetic_sweep(0.1 * nm);
  mixed[0].s_eff_uncertainty = 0.0;
  CHECK_THROWS_AS(velocity_sweep_regression(mixed), DomainError);

  auto negative = synthetic_sweep();
  negative[1].velocity = -5.0;
  CHECK_THROWS_AS(velocity_sweep_regression(negative), DomainError);
}

TEST_CASE("dimer size from a 2.5 nm difference is 50 angstrom") {
  std::vector<SweepPoint> atom;
  std::vector<SweepPoint> dimer;
  for (double v : {600.0, 900.0, 1300.0}) {
    atom.push_back({v, 60 * nm, 0.0});
    dimer.push_back({v, 57.5 * nm, 0.0});
  }
  const DimerResult r = dimer_mean_distance(atom, dimer);
  CHECK(rel_diff(r.r_mean / constants::angstrom, 50.0) <= 1e-12);
  CHECK(r.per_velocity.size() == 3);
  CHECK(r.negative_count == 0);

  const DimerResult zero = dimer_mean_distance(atom, atom);
  CHECK(zero.r_mean == 0.0);

  const DimerResult swapped = dimer_mean_distance(dimer, atom);
  CHECK(swapped.r_mean == -r.r_mean);
  CHECK(swapped.negative_count == 3);
}

TEST_CASE("dimer mean is inverse-variance weighted") {
  const std::vector<SweepPoint> atom = {{700.0, 60 * nm, 0.1 * nm}, {1000.0, 60 * nm, 0.1 * nm}};
  const std::vector<SweepPoint> dimer = {{1000.0, 57.3 * nm, 0.1 * nm}, {700.0, 57.5 * nm, 0.1 * nm}};
  const DimerResult r = dimer_mean_distance(atom, dimer);
  // 5.0 nm and 5.4 nm with equal errors.
  CHECK(rel_diff(r.r_mean, 5.2 * nm) <= 1e-12);
  CHECK(rel_diff(r.r_uncertainty, 2.0 * std::hypot(0.1, 0.1) * nm / std::sqrt(2.0)) <= 1e-12);

  const std::vector<SweepPoint> elsewhere = {{1500.0, 57.5 * nm, 0.1 * nm}};
  CHECK_THROWS_AS(dimer_mean_distance(atom, elsewhere), DomainError);
}
