#include "genecop/basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "genecop/stats.hpp"

namespace genecop {

namespace {

constexpr int kQuadNodes = 64;

// Index of the knot span containing u, i.e. largest i with knots[i] <= u,
// clamped so the span is non-degenerate (handles u == 1).
int find_span(const std::vector<double>& knots, int n_basis, int order,
              double u) {
  if (u >= knots[static_cast<std::size_t>(n_basis)]) return n_basis - 1;
  int lo = order - 1, hi = n_basis;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (u < knots[static_cast<std::size_t>(mid)])
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

// The `order` B-spline basis functions that are non-zero on span `span`,
// evaluated at u (Cox-de Boor triangular scheme).
void basis_funs(const std::vector<double>& knots, int span, int order,
                double u, double* out) {
  std::vector<double> left(static_cast<std::size_t>(order));
  std::vector<double> right(static_cast<std::size_t>(order));
  out[0] = 1.0;
  for (int j = 1; j < order; ++j) {
    left[static_cast<std::size_t>(j)] =
        u - knots[static_cast<std::size_t>(span + 1 - j)];
    right[static_cast<std::size_t>(j)] =
        knots[static_cast<std::size_t>(span + j)] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[static_cast<std::size_t>(r + 1)] +
                           left[static_cast<std::size_t>(j - r)];
      const double temp = out[r] / denom;
      out[r] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    out[j] = saved;
  }
}

void check_unit_interval(double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw DomainError("basis evaluation point outside [0,1]");
}

}  // namespace

std::vector<double> bspline_knots(const BasisSpec& spec) {
  validate_basis_spec(spec);
  if (spec.family != BasisFamily::BSpline)
    throw DomainError("knot vector requested for a non-B-spline basis");
  const int n_interior = spec.n_basis - spec.order;
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(spec.n_basis + spec.order));
  for (int i = 0; i < spec.order; ++i) knots.push_back(0.0);
  for (int i = 1; i <= n_interior; ++i)
    knots.push_back(static_cast<double>(i) / (n_interior + 1));
  for (int i = 0; i < spec.order; ++i) knots.push_back(1.0);
  return knots;
}

std::vector<double> basis_breakpoints(const BasisSpec& spec) {
  validate_basis_spec(spec);
  std::vector<double> breaks{0.0};
  if (spec.family == BasisFamily::BSpline) {
    const int n_interior = spec.n_basis - spec.order;
    for (int i = 1; i <= n_interior; ++i)
      breaks.push_back(static_cast<double>(i) / (n_interior + 1));
  }
  breaks.push_back(1.0);
  return breaks;
}

Eigen::MatrixXd eval_basis(const BasisSpec& spec,
                           const std::vector<double>& points) {
  validate_basis_spec(spec);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(points.size()), spec.n_basis);

  if (spec.family == BasisFamily::Fourier) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double u = points[i];
      check_unit_interval(u);
      const auto row = static_cast<Eigen::Index>(i);
      out(row, 0) = 1.0;
      const int n_pairs = (spec.n_basis - 1) / 2;
      for (int r = 1; r <= n_pairs; ++r) {
        const double arg = 2.0 * M_PI * r * u;
        out(row, 2 * r - 1) = std::sin(arg);
        out(row, 2 * r) = std::cos(arg);
      }
    }
    return out;
  }

  const std::vector<double> knots = bspline_knots(spec);
  std::vector<double> vals(static_cast<std::size_t>(spec.order));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double u = points[i];
    check_unit_interval(u);
    const int span = find_span(knots, spec.n_basis, spec.order, u);
    basis_funs(knots, span, spec.order, u, vals.data());
    for (int j = 0; j < spec.order; ++j)
      out(static_cast<Eigen::Index>(i), span - spec.order + 1 + j) =
          vals[static_cast<std::size_t>(j)];
  }
  return out;
}

Eigen::VectorXd eval_basis_at(const BasisSpec& spec, double u) {
  return eval_basis(spec, {u}).row(0);
}

Eigen::VectorXd smooth_gvf(const std::vector<double>& genotypes,
                           const std::vector<double>& std_positions,
                           const BasisSpec& spec) {
  if (genotypes.size() != std_positions.size())
    throw DomainError("smooth_gvf: genotype / position length mismatch");
  std::vector<double> obs_pos;
  std::vector<double> obs_dose;
  obs_pos.reserve(genotypes.size());
  obs_dose.reserve(genotypes.size());
  for (std::size_t j = 0; j < genotypes.size(); ++j) {
    if (is_missing(genotypes[j])) continue;
    obs_pos.push_back(std_positions[j]);
    obs_dose.push_back(genotypes[j]);
  }
  if (obs_pos.size() < static_cast<std::size_t>(spec.n_basis))
    throw SmootherError(
        "smooth_gvf: fewer observed genotype calls than basis functions");

  const Eigen::MatrixXd phi = eval_basis(spec, obs_pos);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
  qr.setThreshold(1e-10);
  if (qr.rank() < spec.n_basis)
    throw SmootherError("smooth_gvf: rank-deficient basis at these positions");
  const Eigen::Map<const Eigen::VectorXd> g(obs_dose.data(),
                                            static_cast<Eigen::Index>(
                                                obs_dose.size()));
  return qr.solve(g);
}

Eigen::MatrixXd cross_integral(const BasisSpec& gvf, const BasisSpec& gef) {
  validate_basis_spec(gvf);
  validate_basis_spec(gef);

  std::vector<double> breaks = basis_breakpoints(gvf);
  {
    const std::vector<double> extra = basis_breakpoints(gef);
    breaks.insert(breaks.end(), extra.begin(), extra.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  }

  const GaussLegendre& gl = gauss_legendre(kQuadNodes);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(gvf.n_basis, gef.n_basis);
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s], b = breaks[s + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    std::vector<double> pts(static_cast<std::size_t>(kQuadNodes));
    for (int t = 0; t < kQuadNodes; ++t)
      pts[static_cast<std::size_t>(t)] =
          mid + half * gl.nodes[static_cast<std::size_t>(t)];
    const Eigen::MatrixXd phi = eval_basis(gvf, pts);
    const Eigen::MatrixXd psi = eval_basis(gef, pts);
    for (int t = 0; t < kQuadNodes; ++t)
      out.noalias() += (half * gl.weights[static_cast<std::size_t>(t)]) *
                       phi.row(t).transpose() * psi.row(t);
  }
  return out;
}

DesignMatrix build_design(const std::vector<SubjectRecord>& records,
                          const GeneRegion& region, const ModelSpec& spec) {
  validate_model_spec(spec);
  const std::vector<double> u = standardize_positions(region);
  const std::size_t m = u.size();
  for (const auto& rec : records)
    if (rec.genotypes.size() != m)
      throw DomainError("subject " + rec.id +
                        ": genotype vector does not match region size");

  const auto n = static_cast<Eigen::Index>(records.size());
  DesignMatrix design;
  design.mode = spec.flm_mode;
  design.rows = Eigen::MatrixXd::Zero(n, spec.gef_basis.n_basis);

  if (spec.flm_mode == FlmMode::SmoothEffectOnly) {
    // This mode contracts raw dosages against the effect basis, so every
    // dosage must be observed; datasets with missing calls need the
    // smoothed-genotype mode instead.
    const Eigen::MatrixXd psi = eval_basis(spec.gef_basis, u);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& rec = records[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < m; ++j) {
        if (is_missing(rec.genotypes[j]))
          throw DomainError("subject " + rec.id +
                            ": missing genotype dosage is not supported when "
                            "only the effect function is smoothed");
        if (rec.genotypes[j] != 0.0)
          design.rows.row(i) +=
              rec.genotypes[j] * psi.row(static_cast<Eigen::Index>(j));
      }
    }
    return design;
  }

  const Eigen::MatrixXd w = cross_integral(spec.gvf_basis, spec.gef_basis);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd a =
        smooth_gvf(records[static_cast<std::size_t>(i)].genotypes, u,
                   spec.gvf_basis);
    design.rows.row(i) = a.transpose() * w;
  }
  return design;
}

}  // namespace genecop
