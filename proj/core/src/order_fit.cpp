#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "matterwave/analysis.hpp"
#include "matterwave/errors.hpp"
#include "matterwave/least_squares.hpp"

namespace matterwave {

namespace {

constexpr double kBoundMargin = 1e-12;
constexpr std::array<double, 9> kGridWidths = {0.005,  0.03125, 0.0625, 0.09375, 0.125,
                                               0.15625, 0.1875, 0.21875, 0.25};

struct Sample {
  int order;
  double value;
  double weight;  // 1 / max(uncertainty, floor)
};

std::vector<Sample> select_samples(std::span<const OrderIntensity> orders,
                                   const FitSettings& settings) {
  if (!(settings.uncertainty_floor > 0.0)) {
    throw DomainError("fit: uncertainty floor must be positive");
  }
  std::vector<Sample> samples;
  for (const auto& o : orders) {
    if (o.order == 0 && !settings.include_zeroth_order) {
      continue;
    }
    if (!(o.intensity >= 0.0) || !(o.uncertainty >= 0.0)) {
      throw DomainError("fit: order intensities and uncertainties must be non-negative");
    }
    samples.push_back({o.order, o.intensity, 1.0 / std::max(o.uncertainty, settings.uncertainty_floor)});
  }
  return samples;
}

// Parameters scaled to O(1): s_eff over the period, delta and sigma as squared
// fractions of the period, amplitude over a reference. The model depends on
// delta and sigma only through their squares, so this keeps the gradient
// informative at zero width.
struct Scaling {
  double period;
  double amplitude;

  QuantumPeakParams to_params(const Eigen::VectorXd& x) const {
    return {x[0] * period, std::sqrt(std::max(0.0, x[1])) * period,
            std::sqrt(std::max(0.0, x[2])) * period, x[3] * amplitude};
  }
  Eigen::VectorXd to_vector(const QuantumPeakParams& p) const {
    const double delta = p.delta / period;
    const double sigma = p.sigma / period;
    Eigen::VectorXd x(4);
    x << p.s_eff / period, delta * delta, sigma * sigma, p.amplitude / amplitude;
    return x;
  }
};

void set_bounds(LeastSquaresProblem& problem) {
  constexpr double width_cap = (1.0 - kBoundMargin) * (1.0 - kBoundMargin);
  problem.lower = Eigen::Vector4d(kBoundMargin, 0.0, 0.0, kBoundMargin);
  problem.upper = Eigen::Vector4d(1.0 - kBoundMargin, width_cap, width_cap,
                                  std::numeric_limits<double>::infinity());
}

void evaluate(const std::vector<Sample>& samples, const Scaling& scaling, const Eigen::VectorXd& x,
              Eigen::VectorXd& residuals, Eigen::MatrixXd* jacobian) {
  const auto m = static_cast<Eigen::Index>(samples.size());
  residuals.resize(m);
  if (jacobian) {
    jacobian->resize(m, 4);
  }
  const QuantumPeakParams params = scaling.to_params(x);
  const double d2 = scaling.period * scaling.period;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Sample& s = samples[static_cast<std::size_t>(i)];
    const QuantumIntensityGradient g = quantum_order_intensity_gradient(s.order, params, scaling.period);
    residuals[i] = (g.value - s.value) * s.weight;
    if (jacobian) {
      (*jacobian)(i, 0) = g.d_s_eff * scaling.period * s.weight;
      (*jacobian)(i, 1) = g.d_delta_squared * d2 * s.weight;
      (*jacobian)(i, 2) = g.d_sigma_squared * d2 * s.weight;
      (*jacobian)(i, 3) = g.d_amplitude * scaling.amplitude * s.weight;
    }
  }
}

// Jacobian in the physical parameters, each scaled by (period, period, period, amplitude).
Eigen::MatrixXd physical_jacobian(const std::vector<Sample>& samples, const Scaling& scaling,
                                  const QuantumPeakParams& params) {
  Eigen::MatrixXd j(static_cast<Eigen::Index>(samples.size()), 4);
  for (Eigen::Index i = 0; i < j.rows(); ++i) {
    const Sample& s = samples[static_cast<std::size_t>(i)];
    const QuantumIntensityGradient g = quantum_order_intensity_gradient(s.order, params, scaling.period);
    j(i, 0) = g.d_s_eff * scaling.period * s.weight;
    j(i, 1) = g.d_delta * scaling.period * s.weight;
    j(i, 2) = g.d_sigma * scaling.period * s.weight;
    j(i, 3) = g.d_amplitude * scaling.amplitude * s.weight;
  }
  return j;
}

struct GridCandidate {
  QuantumPeakParams params;
  double chi2;
  double log_score;  // squared log-ratio of model to data over positive orders
};

// Coarse grid over shape parameters with the amplitude solved linearly. Each
// point is scored both by chi-square, which is dominated by the strong low
// orders, and by relative (log) misfit, which follows the fall-off of the weak
// high orders.
std::vector<GridCandidate> grid_candidates(const std::vector<Sample>& samples, double period) {
  std::vector<GridCandidate> candidates;
  std::vector<double> model(samples.size());
  for (int k = 1; k <= 19; ++k) {
    const double s_eff = 0.05 * k * period;
    for (const double delta : kGridWidths) {
      for (const double sigma : kGridWidths) {
        const QuantumPeakParams shape{s_eff, delta * period, sigma * period, 1.0};
        double num = 0.0;
        double den = 0.0;
        double log_sum = 0.0;
        double log_count = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
          model[i] = quantum_order_intensity_gradient(samples[i].order, shape, period).value;
          const double w2 = samples[i].weight * samples[i].weight;
          num += w2 * model[i] * samples[i].value;
          den += w2 * model[i] * model[i];
          if (samples[i].value > 0.0 && model[i] > 0.0) {
            log_sum += std::log(samples[i].value / model[i]);
            log_count += 1.0;
          }
        }
        if (!(num > 0.0) || !(den > 0.0)) {
          continue;
        }
        const double amplitude = num / den;
        const double log_amplitude = log_count > 0.0 ? log_sum / log_count : 0.0;
        double chi2 = 0.0;
        double log_score = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
          const double r = (amplitude * model[i] - samples[i].value) * samples[i].weight;
          chi2 += r * r;
          if (samples[i].value > 0.0 && model[i] > 0.0) {
            const double lr = std::log(samples[i].value / model[i]) - log_amplitude;
            log_score += lr * lr;
          }
        }
        candidates.push_back({{s_eff, delta * period, sigma * period, amplitude}, chi2, log_score});
      }
    }
  }
  return candidates;
}

std::vector<QuantumPeakParams> grid_starts(const std::vector<Sample>& samples, double period,
                                           int per_score) {
  std::vector<GridCandidate> grid = grid_candidates(samples, period);
  if (grid.empty()) {
    throw InsufficientDataError("fit: no grid point gives a positive amplitude");
  }
  const std::size_t count = std::min(grid.size(), static_cast<std::size_t>(std::max(1, per_score)));
  std::vector<QuantumPeakParams> starts;
  auto take_best = [&](auto key) {
    std::stable_sort(grid.begin(), grid.end(),
                     [&](const GridCandidate& a, const GridCandidate& b) { return key(a) < key(b); });
    for (std::size_t i = 0; i < count; ++i) {
      if (std::find(starts.begin(), starts.end(), grid[i].params) == starts.end()) {
        starts.push_back(grid[i].params);
      }
    }
  };
  take_best([](const GridCandidate& c) { return c.chi2; });
  take_best([](const GridCandidate& c) { return c.log_score; });

  // Without the zeroth order, s_eff and d - s_eff fit equally well (the
  // amplitude absorbs the ratio of the denominators), so descend from the
  // mirror of every start too.
  const std::size_t direct = starts.size();
  for (std::size_t i = 0; i < direct; ++i) {
    const QuantumPeakParams p = starts[i];
    const double mirrored = period - p.s_eff;
    const double ratio = (mirrored * mirrored + p.delta * p.delta) / (p.s_eff * p.s_eff + p.delta * p.delta);
    starts.push_back({mirrored, p.delta, p.sigma, p.amplitude * ratio});
  }
  return starts;
}

}  // namespace

double FitResult::uncertainty(FitParameter p) const {
  return std::sqrt(std::max(0.0, covariance[p][p]));
}

double fit_objective(std::span<const OrderIntensity> orders, const QuantumPeakParams& params,
                     double period, const FitSettings& settings) {
  const std::vector<Sample> samples = select_samples(orders, settings);
  double chi2 = 0.0;
  for (const auto& s : samples) {
    const double r = (quantum_order_intensity_gradient(s.order, params, period).value - s.value) * s.weight;
    chi2 += r * r;
  }
  return chi2;
}

FitResult fit_order_intensities(std::span<const OrderIntensity> orders, double period,
                                std::optional<QuantumPeakParams> initial_guess,
                                const FitSettings& settings) {
  if (!(period > 0.0)) {
    throw DomainError("fit: period must be positive");
  }
  const std::vector<Sample> samples = select_samples(orders, settings);
  std::set<int> positive_orders;
  for (const auto& s : samples) {
    if (s.value > 0.0) {
      positive_orders.insert(std::abs(s.order));
    }
  }
  if (positive_orders.size() < 4) {
    throw InsufficientDataError("fit needs at least 4 distinct |n| with positive intensity, got " +
                                std::to_string(positive_orders.size()));
  }

  std::vector<QuantumPeakParams> starts;
  if (initial_guess) {
    initial_guess->validate();
    starts.push_back(*initial_guess);
  } else {
    starts = grid_starts(samples, period, settings.grid_starts);
  }

  LeastSquaresOptions options;
  options.max_iterations = settings.max_iterations;
  options.step_tolerance = settings.step_tolerance;
  options.gradient_tolerance = settings.gradient_tolerance;
  options.optimality_tolerance = settings.optimality_tolerance;

  std::optional<LeastSquaresResult> best;
  Scaling best_scaling{period, 1.0};
  for (const auto& start : starts) {
    const Scaling scaling{period, start.amplitude};
    LeastSquaresProblem problem;
    problem.evaluate = [&samples, scaling](const Eigen::VectorXd& x, Eigen::VectorXd& r,
                                           Eigen::MatrixXd* j) { evaluate(samples, scaling, x, r, j); };
    set_bounds(problem);
    LeastSquaresResult run = levenberg_marquardt(problem, scaling.to_vector(start), options);
    if (!best || run.cost < best->cost) {
      best = std::move(run);
      best_scaling = scaling;
    }
  }

  FitResult fit;
  fit.params = best_scaling.to_params(best->x);
  fit.residual_norm = std::sqrt(best->cost);
  fit.gradient_norm = best->gradient_norm;
  fit.curvature_scale = best->curvature_scale;
  fit.converged = best->converged;
  fit.iterations = best->iterations;
  for (const auto& s : samples) {
    fit.orders_used.push_back(s.order);
  }

  const Eigen::MatrixXd jac = physical_jacobian(samples, best_scaling, fit.params);
  const Eigen::MatrixXd normal = jac.transpose() * jac;
  const Eigen::MatrixXd cov = symmetric_pseudo_inverse(normal);
  const std::array<double, 4> scale = {period, period, period, best_scaling.amplitude};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      fit.covariance[i][j] =
          cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * scale[i] * scale[j];
    }
  }
  return fit;
}

}  // namespace matterwave
