#pragma once

#include <functional>

#include <Eigen/Dense>

namespace matterwave {

/// A residual model r(x) with Jacobian, optionally restricted to a box.
struct LeastSquaresProblem {
  /// Fill `residuals` (and `jacobian`, when non-null) at `x`.
  std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& residuals,
                     Eigen::MatrixXd* jacobian)>
      evaluate;
  /// Box bounds; leave empty for an unbounded coordinate set. Use +-infinity
  /// for individual unbounded coordinates.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LeastSquaresOptions {
  int max_iterations = 200;
  /// Stop when every |step_i| < step_tolerance * (|x_i| + step_tolerance).
  double step_tolerance = 1e-10;
  /// Stop when |projected J^T r| <= gradient_tolerance * trace(J^T J).
  double gradient_tolerance = 1e-14;
  /// A stopped run counts as converged only if the projected gradient is
  /// within optimality_tolerance * trace(J^T J).
  double optimality_tolerance = 1e-8;
  /// Relative to diag(J^T J); independent of the residual scale.
  double initial_damping = 1e-3;
};

enum class StopReason { kStepTolerance, kGradientTolerance, kZeroResidual, kIterationCap, kStalled };

struct LeastSquaresResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;
  double cost = 0.0;           // sum of squared residuals
  double gradient_norm = 0.0;  // projected gradient J^T r
  double curvature_scale = 0.0;  // trace(J^T J)
  int iterations = 0;
  StopReason stop_reason = StopReason::kIterationCap;
  bool converged = false;
};

/// Levenberg-Marquardt with Marquardt diagonal scaling and Nielsen's damping
/// update. Bounds are handled by an active set: coordinates sitting on a bound
/// with the gradient pushing outward are frozen for the step, trial points are
/// clamped into the box, and convergence is judged on the projected gradient.
/// Deterministic for given inputs.
LeastSquaresResult levenberg_marquardt(const LeastSquaresProblem& problem,
                                       const Eigen::VectorXd& start,
                                       const LeastSquaresOptions& options = {});

/// Moore-Penrose inverse of a symmetric positive semidefinite matrix;
/// eigenvalues below rel_cutoff * max eigenvalue are treated as zero.
Eigen::MatrixXd symmetric_pseudo_inverse(const Eigen::MatrixXd& matrix, double rel_cutoff = 1e-14);

}  // namespace matterwave
