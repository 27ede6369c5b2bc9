#pragma once

#include <Eigen/Core>
#include <vector>

#include "genecop/types.hpp"

namespace genecop {

/// Evaluates every basis function at every point.  `points` must lie in
/// [0,1]; the returned matrix is points.size() x spec.n_basis.
///
/// B-spline bases are clamped with uniformly spaced interior knots, so rows
/// form a partition of unity.  Fourier bases are (1, sin(2*pi*u),
/// cos(2*pi*u), sin(4*pi*u), ...).
Eigen::MatrixXd eval_basis(const BasisSpec& spec,
                           const std::vector<double>& points);

/// Single-point convenience overload.
Eigen::VectorXd eval_basis_at(const BasisSpec& spec, double u);

/// Full clamped knot vector (length n_basis + order) of a B-spline spec.
std::vector<double> bspline_knots(const BasisSpec& spec);

/// Piecewise-smoothness breakpoints of the basis within [0,1] (knot sites
/// for B-splines, just {0,1} for Fourier).  Sorted, deduplicated, and
/// bracketed by 0 and 1.
std::vector<double> basis_breakpoints(const BasisSpec& spec);

/// Least-squares coefficients of one subject's genotype variant function:
/// fits `spec` to the observed (non-missing) dosages at the standardized
/// positions.  Throws SmootherError when fewer observed calls than basis
/// functions remain or the system is rank deficient.
Eigen::VectorXd smooth_gvf(const std::vector<double>& genotypes,
                           const std::vector<double>& std_positions,
                           const BasisSpec& spec);

/// Matrix of pairwise products integrated over [0,1]:
/// out(a,b) = int_0^1 phi_a(u) psi_b(u) du for phi from `gvf`, psi from
/// `gef`.  Composite Gauss-Legendre over the union of both bases'
/// breakpoints, 64 nodes per subinterval.
Eigen::MatrixXd cross_integral(const BasisSpec& gvf, const BasisSpec& gef);

/// Per-subject functional design rows for the genetic effect block.
struct DesignMatrix {
  Eigen::MatrixXd rows;  // n x gef_basis.n_basis
  FlmMode mode = FlmMode::SmoothEffectOnly;
};

/// Builds the genetic-effect design for a region.
///
/// SmoothEffectOnly: row_i = sum_j g_ij * psi(u_j)'; every dosage must be
/// observed (missing calls throw DomainError — use SmoothBoth for data with
/// missing genotypes).
/// SmoothBoth: row_i = a_i' * cross_integral(gvf, gef), where a_i are the
/// subject's smoothed-genotype coefficients; missing dosages are absorbed by
/// the subject's own smoother.
DesignMatrix build_design(const std::vector<SubjectRecord>& records,
                          const GeneRegion& region, const ModelSpec& spec);

}  // namespace genecop
