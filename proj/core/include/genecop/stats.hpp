#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace genecop {

/// Upper-tail probability P(X > x) for a chi-square variable with `df`
/// degrees of freedom, computed through the regularized incomplete gamma
/// function (series / continued-fraction split).  Relative accuracy is near
/// machine precision across the practical range.  Throws DomainError for
/// x < 0 or df < 1.
double chisq_sf(double x, int df);

/// Standard normal CDF.
double norm_cdf(double x);

/// Standard normal quantile (inverse CDF) for p in (0,1); rational
/// approximation polished by one Halley step, accurate to ~1e-15.
/// Throws DomainError outside (0,1).
double norm_quantile(double p);

/// Kendall's tau-b rank correlation computed in O(n log n) via merge-sort
/// inversion counting.  Ties handled by the tau-b normalization.  Throws
/// DomainError if the vectors differ in length, have fewer than two
/// elements, or either one is constant.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

/// One-sample Kolmogorov-Smirnov distance sup_t |F_n(t) - F(t)| of `sample`
/// against a continuous reference CDF.
double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf);

/// Asymptotic two-sided p-value for a one-sample KS distance at sample size
/// n (Kolmogorov tail with the standard small-sample continuity
/// correction).
double ks_pvalue(double distance, std::size_t n);

/// Gauss-Legendre nodes and weights on [-1,1].  Nodes are returned in
/// increasing order; results for a given n are cached.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

}  // namespace genecop
