#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "genecop/errors.hpp"

namespace genecop {

/// Missing genotype calls are carried as NaN dosages.
inline constexpr double kMissingGenotype =
    std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double dosage) { return std::isnan(dosage); }

enum class CopulaKind { Clayton, Gumbel, Independence };
enum class BasisFamily { BSpline, Fourier };
enum class FlmMode { SmoothBoth, SmoothEffectOnly };
enum class TestKind { Score, Lrt };

const char* to_string(CopulaKind kind);
const char* to_string(BasisFamily family);
const char* to_string(FlmMode mode);
const char* to_string(TestKind kind);

/// One subject: two possibly-censored event times, fixed covariates, and
/// genotype dosages for the gene region under analysis.
///
/// `y1`, `y2` are follow-up times (> 0 except for the degenerate time-zero
/// case, which the likelihood handles); `d1`, `d2` are event indicators
/// (true = event observed, false = right-censored).  `genotypes[j]` is the
/// minor-allele dosage in {0,1,2} for the region's j-th variant, or NaN when
/// the call is missing.
struct SubjectRecord {
  std::string id;
  double y1 = 0.0;
  double y2 = 0.0;
  bool d1 = false;
  bool d2 = false;
  std::vector<double> covariates;
  std::vector<double> genotypes;
};

/// Throws DomainError unless times are finite and non-negative, covariates
/// are finite and of the expected length, and dosages are in {0,1,2} or NaN.
void validate_record(const SubjectRecord& rec, std::size_t expected_covariates,
                     std::size_t expected_variants);

/// A gene region: ordered variant coordinates plus identifiers.  Positions
/// must be finite and strictly increasing (duplicates rejected) and at least
/// two variants are required for position standardization to be defined.
struct GeneRegion {
  std::string name;
  std::vector<double> positions;
  std::vector<std::string> variant_ids;

  std::size_t n_variants() const { return positions.size(); }
};

/// Throws InvalidRegionError on any structural violation of `region`.
void validate_region(const GeneRegion& region);

/// Affine map of the region's physical coordinates onto [0,1]: the first
/// variant lands on 0, the last on 1, interior spacing preserved.
std::vector<double> standardize_positions(const GeneRegion& region);

/// Specification of a functional basis on [0,1].
///
/// BSpline: `n_basis` clamped B-splines of order `order` (degree order-1)
/// over uniformly spaced interior knots; requires n_basis >= order >= 2.
/// Fourier: columns ordered (1, sin(2*pi*u), cos(2*pi*u), sin(4*pi*u), ...);
/// requires odd n_basis so sine/cosine pairs are complete.
struct BasisSpec {
  BasisFamily family = BasisFamily::BSpline;
  int n_basis = 5;
  int order = 4;

  static BasisSpec bspline(int n_basis, int order = 4);
  static BasisSpec fourier(int n_basis);
};

/// Throws DomainError if the specification is malformed.
void validate_basis_spec(const BasisSpec& spec);

/// Model layout for a bivariate-survival functional association model.
///
/// Margins are Weibull with baseline survival S0(t) = exp(-(lambda*t)^k),
/// proportional-hazards covariate and genetic effects, and the two margins
/// coupled by the named copula family.  `gvf_basis` smooths raw genotypes
/// into genetic variant functions (used only in SmoothBoth mode);
/// `gef_basis` expands the genetic effect function, so gef_basis.n_basis is
/// the dimension of the tested coefficient block.
struct ModelSpec {
  CopulaKind copula = CopulaKind::Clayton;
  FlmMode flm_mode = FlmMode::SmoothEffectOnly;
  BasisSpec gvf_basis = BasisSpec::bspline(10);
  BasisSpec gef_basis = BasisSpec::bspline(5);
};

/// Throws DomainError on malformed basis specs or an undersized genotype
/// smoother (SmoothBoth needs gvf_basis.n_basis >= gef_basis.n_basis).
void validate_model_spec(const ModelSpec& spec);

/// Model parameters on the unconstrained optimization scale.
///
/// Margin scale/shape enter as logs; `dep` carries log(eta) for Clayton,
/// log(eta - 1) for Gumbel, and is absent for Independence.  `gamma` is the
/// genetic-effect coefficient block (dimension gef_basis.n_basis).
struct ParameterVector {
  double log_lambda1 = 0.0;
  double log_k1 = 0.0;
  double log_lambda2 = 0.0;
  double log_k2 = 0.0;
  Eigen::VectorXd beta;
  std::optional<double> dep;
  Eigen::VectorXd gamma;
};

/// Model parameters on their natural scale (all positivity/range
/// constraints explicit).  `eta` is absent for Independence.
struct NaturalParams {
  double lambda1 = 1.0;
  double k1 = 1.0;
  double lambda2 = 1.0;
  double k2 = 1.0;
  Eigen::VectorXd beta;
  std::optional<double> eta;
  Eigen::VectorXd gamma;
};

/// Natural -> unconstrained.  Throws DomainError when a natural parameter
/// sits outside its domain (lambda, k <= 0; Clayton eta <= 0; Gumbel
/// eta <= 1; dependence parameter present/absent mismatch with `copula`).
ParameterVector to_unconstrained(const NaturalParams& natural,
                                 CopulaKind copula);

/// Unconstrained -> natural.  Total inverse of to_unconstrained; throws
/// DomainError only on a present/absent mismatch of `dep` with `copula`.
NaturalParams from_unconstrained(const ParameterVector& params,
                                 CopulaKind copula);

/// Result of a maximum-likelihood fit.  `score` and `observed_info` are the
/// gradient and negative Hessian of the log-likelihood over the full
/// parameter vector (gamma block included, in the packed layout used by the
/// inference routines) evaluated at `params`.
struct FitResult {
  ParameterVector params;
  double loglik = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd score;
  Eigen::MatrixXd observed_info;
  bool converged = false;
  int n_iter = 0;
  double grad_norm = std::numeric_limits<double>::infinity();
  std::string note;
};

/// Result of one association test.  `singular` marks a degenerate
/// information matrix (for example a region with all-zero design rows); such
/// results report statistic 0 and p-value 1 rather than failing.
struct TestResult {
  TestKind kind = TestKind::Score;
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  bool singular = false;
  std::string note;
};

}  // namespace genecop
