#pragma once

#include <Eigen/Core>
#include <functional>

namespace genecop {

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

/// Central-difference gradient with one Richardson extrapolation step:
/// each coordinate combines difference quotients at h and h/2 as
/// (4*D(h/2) - D(h)) / 3, with h = base_step * max(1, |x_j|).
Eigen::VectorXd numeric_gradient(const ScalarFn& f, const Eigen::VectorXd& x,
                                 double base_step = 1e-4);

/// Richardson-extrapolated Hessian: second central differences on the
/// diagonal, 4-point cross stencils off it, each at two step sizes, then
/// symmetrized.  Cost is 4*d^2 + 1 evaluations in dimension d.
Eigen::MatrixXd numeric_hessian(const ScalarFn& f, const Eigen::VectorXd& x,
                                double base_step = 1e-4);

}  // namespace genecop
