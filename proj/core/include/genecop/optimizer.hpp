#pragma once

#include <Eigen/Core>

#include "genecop/numdiff.hpp"

namespace genecop {

struct OptimizerConfig {
  int max_iter = 500;
  /// Convergence: ||grad||_inf <= grad_tol * (1 + |f|).
  double grad_tol = 1e-6;
  /// Base step of the Richardson finite differences.
  double base_step = 1e-4;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
};

struct MaximizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  double grad_norm = 0.0;
  int n_iter = 0;
  bool converged = false;
};

/// Maximizes f by BFGS with backtracking Armijo line search, gradients by
/// Richardson finite differences.  Points where f throws (or returns a
/// non-finite value) act as barriers during the line search.  Throws
/// ConvergenceError when the starting point itself is infeasible.
MaximizeResult maximize(const ScalarFn& f, const Eigen::VectorXd& x0,
                        const OptimizerConfig& cfg = {});

}  // namespace genecop
