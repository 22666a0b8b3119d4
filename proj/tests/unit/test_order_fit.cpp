#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "fixtures.hpp"
#include "matterwave/analysis.hpp"
#include "matterwave/errors.hpp"

using namespace matterwave;
using namespace matterwave::testing;

namespace {

constexpr double d = 100 * nm;

std::vector<OrderIntensity> exact_orders(const QuantumPeakParams& p, int max_order, bool zeroth = true,
                                         double uncertainty = 0.0) {
  std::vector<OrderIntensity> out;
  for (int n = -max_order; n <= max_order; ++n) {
    if (n == 0 && !zeroth) continue;
    out.push_back({n, quantum_order_intensity(n, p, d), uncertainty});
  }
  return out;
}

Eigen::Matrix4d to_eigen(const std::array<std::array<double, 4>, 4>& m) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

}  // namespace

TEST_CASE("exact intensities up to seventh order are recovered") {
  const QuantumPeakParams truth = reference_params();
  const auto fit = fit_order_intensities(exact_orders(truth, 7), d, std::nullopt);
  CHECK(fit.converged);
  CHECK(rel_diff(fit.params.s_eff, truth.s_eff) <= 1e-6);
  CHECK(rel_diff(fit.params.delta, truth.delta) <= 1e-6);
  CHECK(rel_diff(fit.params.sigma, truth.sigma) <= 1e-6);
  CHECK(rel_diff(fit.params.amplitude, truth.amplitude) <= 1e-6);
  CHECK(fit.orders_used.size() == 15);  // zeroth order included by default
  CHECK(fit.residual_norm <= 1e-10);
}

TEST_CASE("reduction-case data drives delta and sigma to the boundary") {
  const QuantumPeakParams truth{62 * nm, 0.0, 0.0, 2.0};
  const auto fit = fit_order_intensities(exact_orders(truth, 7), d, std::nullopt);
  CHECK(fit.converged);
  CHECK(fit.params.delta <= 1e-6 * d);
  CHECK(fit.params.sigma <= 1e-6 * d);
  CHECK(rel_diff(fit.params.s_eff, truth.s_eff) <= 1e-6);
  CHECK(rel_diff(fit.params.amplitude, truth.amplitude) <= 1e-6);
}

TEST_CASE("without order 0 and contrast, s_eff is only known up to d - s_eff") {
  const QuantumPeakParams truth{62 * nm, 0.0, 0.0, 2.0};
  FitSettings without_zero;
  without_zero.include_zeroth_order = false;
  const auto fit = fit_order_intensities(exact_orders(truth, 7, false), d, std::nullopt, without_zero);
  CHECK(fit.converged);
  CHECK(fit.params.delta <= 1e-6 * d);
  CHECK(fit.params.sigma <= 1e-6 * d);
  const bool direct = rel_diff(fit.params.s_eff, truth.s_eff) <= 1e-6;
  const bool mirrored = rel_diff(fit.params.s_eff, d - truth.s_eff) <= 1e-6;
  CHECK((direct || mirrored));
  // Both branches reproduce the data.
  CHECK(fit.residual_norm <= 1e-8);
}

TEST_CASE("too few usable orders") {
  FitSettings without_zero;
  without_zero.include_zeroth_order = false;
  const auto orders = exact_orders(reference_params(), 3);  // |n| in {1, 2, 3} besides 0
  CHECK_THROWS_AS(fit_order_intensities(orders, d, std::nullopt, without_zero), InsufficientDataError);

  // Zero-intensity orders do not count.
  auto padded = exact_orders(reference_params(), 5);
  for (auto& o : padded) {
    if (std::abs(o.order) >= 4) o.intensity = 0.0;
  }
  CHECK_THROWS_AS(fit_order_intensities(padded, d, std::nullopt, without_zero), InsufficientDataError);

  // The zeroth order makes four.
  CHECK_NOTHROW(fit_order_intensities(orders, d, std::nullopt));
}

TEST_CASE("iteration cap yields an unconverged result, not an exception") {
  FitSettings capped;
  capped.max_iterations = 1;
  capped.grid_starts = 1;
  const QuantumPeakParams start{30 * nm, 20 * nm, 1 * nm, 0.2};
  const auto fit = fit_order_intensities(exact_orders(reference_params(), 7), d, start, capped);
  CHECK_FALSE(fit.converged);
  CHECK(fit.iterations == 1);
}

TEST_CASE("explicit initial guess") {
  const QuantumPeakParams truth{45 * nm, 4 * nm, 2 * nm, 1.5};
  const QuantumPeakParams guess{48 * nm, 3 * nm, 3 * nm, 1.0};
  const auto fit = fit_order_intensities(exact_orders(truth, 7), d, guess);
  CHECK(fit.converged);
  CHECK(rel_diff(fit.params.s_eff, truth.s_eff) <= 1e-8);
  CHECK_THROWS_AS(fit_order_intensities(exact_orders(truth, 7), d, QuantumPeakParams{-1.0, 0, 0, 1}),
                  DomainError);
}

TEST_CASE("noisy fit: covariance, optimality and amplitude equivariance") {
  const QuantumPeakParams truth{60 * nm, 5 * nm, 3 * nm, 2e4};
  std::mt19937_64 rng(17);
  std::vector<OrderIntensity> orders;
  for (int n = -7; n <= 7; ++n) {
    if (n == 0) continue;
    const double mean = quantum_order_intensity(n, truth, d);
    std::normal_distribution<double> noise(mean, std::sqrt(mean));
    const double value = std::max(0.0, noise(rng));
    orders.push_back({n, value, std::sqrt(std::max(value, 1.0))});
  }
  const auto fit = fit_order_intensities(orders, d, std::nullopt);
  REQUIRE(fit.converged);

  SUBCASE("covariance is symmetric positive semidefinite") {
    const Eigen::Matrix4d cov = to_eigen(fit.covariance);
    CHECK((cov - cov.transpose()).norm() <= 1e-15 * cov.norm());
    // Compare in normalised units so the amplitude scale does not swamp lengths.
    Eigen::Vector4d scale(d, d, d, fit.params.amplitude);
    const Eigen::Matrix4d unit = scale.cwiseInverse().asDiagonal() * cov * scale.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(unit);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * unit.trace());
    CHECK(fit.uncertainty(kSEff) > 0.0);
  }

  SUBCASE("finite-difference gradient vanishes at the optimum") {
    // Objective in normalised coordinates (lengths / d, amplitude / A).
    auto objective = [&](const Eigen::Vector4d& x) {
      const QuantumPeakParams p{x[0] * d, x[1] * d, x[2] * d, x[3] * fit.params.amplitude};
      return fit_objective(orders, p, d);
    };
    const Eigen::Vector4d x0(fit.params.s_eff / d, fit.params.delta / d, fit.params.sigma / d, 1.0);
    Eigen::Vector4d grad;
    Eigen::Matrix4d hess;
    for (int i = 0; i < 4; ++i) {
      const double h = 1e-7 * std::abs(x0[i]);
      Eigen::Vector4d up = x0, down = x0;
      up[i] += h;
      down[i] -= h;
      grad[i] = (objective(up) - objective(down)) / (2 * h);
      hess(i, i) = (objective(up) - 2 * objective(x0) + objective(down)) / (h * h);
    }
    CHECK(grad.norm() <= 1e-6 * hess.diagonal().sum());
  }

  SUBCASE("scaling intensities scales only the amplitude") {
    const double c = 7.5;
    auto scaled = orders;
    for (auto& o : scaled) {
      o.intensity *= c;
      o.uncertainty *= c;
    }
    const auto refit = fit_order_intensities(scaled, d, std::nullopt);
    CHECK(refit.converged);
    CHECK(rel_diff(refit.params.amplitude, c * fit.params.amplitude) <= 1e-6);
    CHECK(rel_diff(refit.params.s_eff, fit.params.s_eff) <= 1e-6);
    CHECK(rel_diff(refit.params.delta, fit.params.delta) <= 1e-6);
    CHECK(rel_diff(refit.params.sigma, fit.params.sigma) <= 1e-6);
  }
}
