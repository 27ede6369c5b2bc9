#include "genecop/numdiff.hpp"

#include <cmath>

#include "genecop/errors.hpp"

namespace genecop {

namespace {

double coord_step(double base_step, double xj) {
  return base_step * std::max(1.0, std::abs(xj));
}

}  // namespace

Eigen::VectorXd numeric_gradient(const ScalarFn& f, const Eigen::VectorXd& x,
                                 double base_step) {
  if (!(base_step > 0.0)) throw DomainError("numeric_gradient: step <= 0");
  const Eigen::Index d = x.size();
  Eigen::VectorXd grad(d);
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = coord_step(base_step, x[j]);
    const double xj = x[j];
    auto diff = [&](double step) {
      xp[j] = xj + step;
      const double fp = f(xp);
      xp[j] = xj - step;
      const double fm = f(xp);
      xp[j] = xj;
      return (fp - fm) / (2.0 * step);
    };
    const double dh = diff(h);
    const double dh2 = diff(0.5 * h);
    grad[j] = (4.0 * dh2 - dh) / 3.0;
  }
  return grad;
}

Eigen::MatrixXd numeric_hessian(const ScalarFn& f, const Eigen::VectorXd& x,
                                double base_step) {
  if (!(base_step > 0.0)) throw DomainError("numeric_hessian: step <= 0");
  const Eigen::Index d = x.size();
  Eigen::MatrixXd hess(d, d);
  const double f0 = f(x);
  Eigen::VectorXd xp = x;

  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = coord_step(base_step, x[j]);
    const double xj = x[j];
    auto second = [&](double step) {
      xp[j] = xj + step;
      const double fp = f(xp);
      xp[j] = xj - step;
      const double fm = f(xp);
      xp[j] = xj;
      return (fp - 2.0 * f0 + fm) / (step * step);
    };
    const double sh = second(h);
    const double sh2 = second(0.5 * h);
    hess(j, j) = (4.0 * sh2 - sh) / 3.0;
  }

  for (Eigen::Index j = 0; j < d; ++j) {
    const double hj = coord_step(base_step, x[j]);
    const double xj = x[j];
    for (Eigen::Index l = j + 1; l < d; ++l) {
      const double hl = coord_step(base_step, x[l]);
      const double xl = x[l];
      auto cross = [&](double scale) {
        const double sj = scale * hj, sl = scale * hl;
        xp[j] = xj + sj;
        xp[l] = xl + sl;
        const double fpp = f(xp);
        xp[l] = xl - sl;
        const double fpm = f(xp);
        xp[j] = xj - sj;
        const double fmm = f(xp);
        xp[l] = xl + sl;
        const double fmp = f(xp);
        xp[j] = xj;
        xp[l] = xl;
        return (fpp - fpm - fmp + fmm) / (4.0 * sj * sl);
      };
      const double ch = cross(1.0);
      const double ch2 = cross(0.5);
      const double value = (4.0 * ch2 - ch) / 3.0;
      hess(j, l) = value;
      hess(l, j) = value;
    }
  }
  return 0.5 * (hess + hess.transpose());
}

}  // namespace genecop
