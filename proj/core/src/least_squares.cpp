#include "matterwave/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace matterwave {

namespace {

constexpr int kMaxConsecutiveRejections = 60;

struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

  // Coordinates pinned at a bound by a gradient that points out of the box.
  std::vector<bool> active(const Eigen::VectorXd& x, const Eigen::VectorXd& gradient) const {
    std::vector<bool> pinned(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      pinned[static_cast<std::size_t>(i)] =
          (x[i] <= lower[i] && gradient[i] > 0.0) || (x[i] >= upper[i] && gradient[i] < 0.0);
    }
    return pinned;
  }

  Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& gradient) const {
    Eigen::VectorXd out = gradient;
    const auto pinned = active(x, gradient);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (pinned[static_cast<std::size_t>(i)]) out[i] = 0.0;
    }
    return out;
  }
};

Box make_box(const LeastSquaresProblem& problem, Eigen::Index n) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Box box{problem.lower.size() == n ? problem.lower : Eigen::VectorXd::Constant(n, -inf),
          problem.upper.size() == n ? problem.upper : Eigen::VectorXd::Constant(n, inf)};
  return box;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const LeastSquaresProblem& problem,
                                       const Eigen::VectorXd& start,
                                       const LeastSquaresOptions& options) {
  const Eigen::Index n = start.size();
  const Box box = make_box(problem, n);

  LeastSquaresResult result;
  result.x = box.clamp(start);
  problem.evaluate(result.x, result.residuals, &result.jacobian);
  result.cost = result.residuals.squaredNorm();

  Eigen::MatrixXd normal = result.jacobian.transpose() * result.jacobian;
  Eigen::VectorXd gradient = result.jacobian.transpose() * result.residuals;
  // Damping multiplies diag(J^T J), so it is dimensionless.
  double mu = options.initial_damping;
  double nu = 2.0;
  int rejections = 0;

  Eigen::VectorXd trial_residuals;
  Eigen::MatrixXd trial_jacobian;

  for (;;) {
    const double trace = normal.trace();
    const Eigen::VectorXd projected = box.projected_gradient(result.x, gradient);
    if (result.cost == 0.0) {
      result.stop_reason = StopReason::kZeroResidual;
      break;
    }
    if (projected.norm() <= options.gradient_tolerance * trace) {
      result.stop_reason = StopReason::kGradientTolerance;
      break;
    }
    if (result.iterations >= options.max_iterations) {
      result.stop_reason = StopReason::kIterationCap;
      break;
    }
    ++result.iterations;

    // Damped Gauss-Newton step over the free coordinates.
    const auto pinned = box.active(result.x, gradient);
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!pinned[static_cast<std::size_t>(i)]) free.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd damped(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      rhs[a] = -gradient[free[static_cast<std::size_t>(a)]];
      for (Eigen::Index b = 0; b < m; ++b) {
        damped(a, b) = normal(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
      }
      const double diag = normal(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(a)]);
      damped(a, a) += mu * std::max(diag, 1e-300 * std::max(trace, 1e-300));
    }
    Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
    if (m > 0) {
      const Eigen::VectorXd reduced = damped.ldlt().solve(rhs);
      for (Eigen::Index a = 0; a < m; ++a) step[free[static_cast<std::size_t>(a)]] = reduced[a];
    }

    const Eigen::VectorXd trial = box.clamp(result.x + step);
    const Eigen::VectorXd taken = trial - result.x;
    if (!taken.allFinite()) {
      mu *= nu;
      nu *= 2.0;
      if (++rejections > kMaxConsecutiveRejections) {
        result.stop_reason = StopReason::kStalled;
        break;
      }
      continue;
    }
    const bool step_small =
        (taken.array().abs() <= options.step_tolerance * (result.x.array().abs() + options.step_tolerance))
            .all();
    if (step_small) {
      result.stop_reason = StopReason::kStepTolerance;
      break;
    }

    problem.evaluate(trial, trial_residuals, &trial_jacobian);
    const double trial_cost = trial_residuals.allFinite()
                                  ? trial_residuals.squaredNorm()
                                  : std::numeric_limits<double>::infinity();
    // Decrease predicted by the linearised model along the step actually taken.
    const double predicted = -(2.0 * gradient.dot(taken) + taken.dot(normal * taken));
    const double rho = predicted > 0.0 ? (result.cost - trial_cost) / predicted : -1.0;

    if (rho > 0.0 && trial_cost < result.cost) {
      result.x = trial;
      result.residuals = trial_residuals;
      result.jacobian = trial_jacobian;
      result.cost = trial_cost;
      normal = result.jacobian.transpose() * result.jacobian;
      gradient = result.jacobian.transpose() * result.residuals;
      const double t = 2.0 * rho - 1.0;
      mu *= std::max(1.0 / 3.0, 1.0 - t * t * t);
      nu = 2.0;
      rejections = 0;
    } else {
      mu *= nu;
      nu *= 2.0;
      if (++rejections > kMaxConsecutiveRejections) {
        result.stop_reason = StopReason::kStalled;
        break;
      }
    }
  }

  result.gradient_norm = box.projected_gradient(result.x, gradient).norm();
  result.curvature_scale = normal.trace();
  const bool stopped_cleanly = result.stop_reason == StopReason::kStepTolerance ||
                               result.stop_reason == StopReason::kGradientTolerance ||
                               result.stop_reason == StopReason::kZeroResidual;
  result.converged =
      stopped_cleanly &&
      (result.cost == 0.0 ||
       result.gradient_norm <= options.optimality_tolerance * result.curvature_scale);
  return result;
}

Eigen::MatrixXd symmetric_pseudo_inverse(const Eigen::MatrixXd& matrix, double rel_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  Eigen::VectorXd inverted(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    inverted[i] = values[i] > rel_cutoff * largest ? 1.0 / values[i] : 0.0;
  }
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  Eigen::MatrixXd inverse = vectors * inverted.asDiagonal() * vectors.transpose();
  return 0.5 * (inverse + inverse.transpose());
}

}  // namespace matterwave
