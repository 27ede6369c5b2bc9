#include "genecop/optimizer.hpp"

#include <cmath>

#include "genecop/errors.hpp"

namespace genecop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective wrapper: infeasible points become -inf so the line search backs
// away from them instead of aborting the fit.
double safe_eval(const ScalarFn& f, const Eigen::VectorXd& x) {
  try {
    const double v = f(x);
    return std::isfinite(v) ? v : -kInf;
  } catch (const Error&) {
    return -kInf;
  }
}

}  // namespace

MaximizeResult maximize(const ScalarFn& f, const Eigen::VectorXd& x0,
                        const OptimizerConfig& cfg) {
  const Eigen::Index d = x0.size();
  MaximizeResult res;
  res.x = x0;
  res.value = safe_eval(f, x0);
  if (!std::isfinite(res.value))
    throw ConvergenceError("optimizer: objective infeasible at start");

  // Gradient evaluations must stay exact, so they use f directly; stencil
  // points sit base_step away from a feasible iterate.
  auto grad_at = [&](const Eigen::VectorXd& x) {
    return numeric_gradient(f, x, cfg.base_step);
  };

  Eigen::VectorXd g = grad_at(res.x);
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(d, d);

  for (res.n_iter = 0; res.n_iter < cfg.max_iter; ++res.n_iter) {
    res.grad_norm = g.lpNorm<Eigen::Infinity>();
    if (res.grad_norm <= cfg.grad_tol * (1.0 + std::abs(res.value))) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd dir = h_inv * g;  // ascent direction
    double slope = g.dot(dir);
    bool raw_gradient_dir = false;
    if (!(slope > 0.0) || !dir.allFinite()) {
      h_inv.setIdentity();
      dir = g;
      slope = g.squaredNorm();
      raw_gradient_dir = true;
    }

    // Backtracking Armijo line search on the ascent direction.
    double alpha = 1.0;
    double f_new = -kInf;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      x_new = res.x + alpha * dir;
      f_new = safe_eval(f, x_new);
      if (f_new >= res.value + cfg.armijo_c * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= cfg.backtrack;
    }
    if (!accepted) {
      // No acceptable step along this direction; one restart with the raw
      // gradient, then give up (converged stays false).
      if (!raw_gradient_dir) {
        h_inv.setIdentity();
        continue;
      }
      break;
    }

    const Eigen::VectorXd g_new = grad_at(x_new);
    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - g;  // gradient change (ascent scale)

    // BFGS update on the inverse Hessian of -f: curvature s'(-y) > 0.
    const double sy = -s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
      const Eigen::MatrixXd v = eye + rho * s * y.transpose();
      h_inv = v * h_inv * v.transpose() + rho * s * s.transpose();
    }

    res.x = x_new;
    res.value = f_new;
    g = g_new;
  }

  res.gradient = g;
  res.grad_norm = g.lpNorm<Eigen::Infinity>();
  if (!res.converged)
    res.converged =
        res.grad_norm <= cfg.grad_tol * (1.0 + std::abs(res.value));
  return res;
}

}  // namespace genecop
