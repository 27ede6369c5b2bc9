#include "genecop/types.hpp"

#include <cmath>

namespace genecop {

const char* to_string(CopulaKind kind) {
  switch (kind) {
    case CopulaKind::Clayton: return "clayton";
    case CopulaKind::Gumbel: return "gumbel";
    case CopulaKind::Independence: return "independence";
  }
  return "?";
}

const char* to_string(BasisFamily family) {
  switch (family) {
    case BasisFamily::BSpline: return "bspline";
    case BasisFamily::Fourier: return "fourier";
  }
  return "?";
}

const char* to_string(FlmMode mode) {
  switch (mode) {
    case FlmMode::SmoothBoth: return "smooth-both";
    case FlmMode::SmoothEffectOnly: return "smooth-effect-only";
  }
  return "?";
}

const char* to_string(TestKind kind) {
  switch (kind) {
    case TestKind::Score: return "score";
    case TestKind::Lrt: return "lrt";
  }
  return "?";
}

void validate_record(const SubjectRecord& rec, std::size_t expected_covariates,
                     std::size_t expected_variants) {
  auto fail = [&](const std::string& what) {
    throw DomainError("subject " + rec.id + ": " + what);
  };
  if (!(std::isfinite(rec.y1) && rec.y1 >= 0.0))
    fail("follow-up time y1 must be finite and >= 0");
  if (!(std::isfinite(rec.y2) && rec.y2 >= 0.0))
    fail("follow-up time y2 must be finite and >= 0");
  if (rec.covariates.size() != expected_covariates)
    fail("expected " + std::to_string(expected_covariates) +
         " covariates, got " + std::to_string(rec.covariates.size()));
  for (double x : rec.covariates)
    if (!std::isfinite(x)) fail("non-finite covariate");
  if (rec.genotypes.size() != expected_variants)
    fail("expected " + std::to_string(expected_variants) +
         " genotype dosages, got " + std::to_string(rec.genotypes.size()));
  for (double g : rec.genotypes) {
    if (is_missing(g)) continue;
    if (g != 0.0 && g != 1.0 && g != 2.0)
      fail("genotype dosage must be 0, 1, 2 or missing");
  }
}

void validate_region(const GeneRegion& region) {
  auto fail = [&](const std::string& what) {
    throw InvalidRegionError("region " + region.name + ": " + what);
  };
  if (region.positions.size() < 2)
    fail("needs at least two variants");
  if (region.variant_ids.size() != region.positions.size())
    fail("variant id / position count mismatch");
  for (double p : region.positions)
    if (!std::isfinite(p)) fail("non-finite variant position");
  for (std::size_t j = 1; j < region.positions.size(); ++j) {
    if (region.positions[j] == region.positions[j - 1])
      fail("duplicate variant position " +
           std::to_string(region.positions[j]));
    if (region.positions[j] < region.positions[j - 1])
      fail("variant positions must be strictly increasing");
  }
}

std::vector<double> standardize_positions(const GeneRegion& region) {
  validate_region(region);
  const double lo = region.positions.front();
  const double span = region.positions.back() - lo;
  std::vector<double> u(region.positions.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    u[j] = (region.positions[j] - lo) / span;
  u.front() = 0.0;
  u.back() = 1.0;
  return u;
}

BasisSpec BasisSpec::bspline(int n_basis, int order) {
  BasisSpec spec{BasisFamily::BSpline, n_basis, order};
  validate_basis_spec(spec);
  return spec;
}

BasisSpec BasisSpec::fourier(int n_basis) {
  BasisSpec spec{BasisFamily::Fourier, n_basis, 0};
  validate_basis_spec(spec);
  return spec;
}

void validate_basis_spec(const BasisSpec& spec) {
  if (spec.n_basis < 1) throw DomainError("basis size must be positive");
  switch (spec.family) {
    case BasisFamily::BSpline:
      if (spec.order < 2)
        throw DomainError("B-spline order must be at least 2");
      if (spec.n_basis < spec.order)
        throw DomainError("B-spline basis needs n_basis >= order");
      break;
    case BasisFamily::Fourier:
      if (spec.n_basis % 2 == 0)
        throw DomainError(
            "Fourier basis size must be odd (constant plus sine/cosine "
            "pairs)");
      break;
  }
}

void validate_model_spec(const ModelSpec& spec) {
  validate_basis_spec(spec.gef_basis);
  if (spec.flm_mode == FlmMode::SmoothBoth) {
    validate_basis_spec(spec.gvf_basis);
    if (spec.gvf_basis.n_basis < spec.gef_basis.n_basis)
      throw DomainError(
          "genotype smoother must be at least as rich as the effect basis");
  }
}

namespace {

void check_positive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0))
    throw DomainError(std::string(name) + " must be finite and > 0");
}

}  // namespace

ParameterVector to_unconstrained(const NaturalParams& natural,
                                 CopulaKind copula) {
  check_positive(natural.lambda1, "lambda1");
  check_positive(natural.k1, "k1");
  check_positive(natural.lambda2, "lambda2");
  check_positive(natural.k2, "k2");
  ParameterVector out;
  out.log_lambda1 = std::log(natural.lambda1);
  out.log_k1 = std::log(natural.k1);
  out.log_lambda2 = std::log(natural.lambda2);
  out.log_k2 = std::log(natural.k2);
  out.beta = natural.beta;
  out.gamma = natural.gamma;
  switch (copula) {
    case CopulaKind::Clayton:
      if (!natural.eta)
        throw DomainError("Clayton model requires a dependence parameter");
      if (!(std::isfinite(*natural.eta) && *natural.eta > 0.0))
        throw DomainError("Clayton eta must be finite and > 0");
      out.dep = std::log(*natural.eta);
      break;
    case CopulaKind::Gumbel:
      if (!natural.eta)
        throw DomainError("Gumbel model requires a dependence parameter");
      if (!(std::isfinite(*natural.eta) && *natural.eta > 1.0))
        throw DomainError("Gumbel eta must be finite and > 1");
      out.dep = std::log(*natural.eta - 1.0);
      break;
    case CopulaKind::Independence:
      if (natural.eta)
        throw DomainError(
            "Independence model admits no dependence parameter");
      out.dep.reset();
      break;
  }
  return out;
}

NaturalParams from_unconstrained(const ParameterVector& params,
                                 CopulaKind copula) {
  NaturalParams out;
  out.lambda1 = std::exp(params.log_lambda1);
  out.k1 = std::exp(params.log_k1);
  out.lambda2 = std::exp(params.log_lambda2);
  out.k2 = std::exp(params.log_k2);
  out.beta = params.beta;
  out.gamma = params.gamma;
  switch (copula) {
    case CopulaKind::Clayton:
      if (!params.dep)
        throw DomainError("Clayton model requires a dependence parameter");
      out.eta = std::exp(*params.dep);
      break;
    case CopulaKind::Gumbel:
      if (!params.dep)
        throw DomainError("Gumbel model requires a dependence parameter");
      out.eta = 1.0 + std::exp(*params.dep);
      break;
    case CopulaKind::Independence:
      if (params.dep)
        throw DomainError(
            "Independence model admits no dependence parameter");
      out.eta.reset();
      break;
  }
  return out;
}

}  // namespace genecop
