#include "genecop/simulate.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "genecop/stats.hpp"

namespace genecop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CopulaFamily family_for(const SimConfig& cfg) {
  if (cfg.copula == CopulaKind::Independence)
    return CopulaFamily::independence();
  const double eta = tau_to_eta(cfg.copula, cfg.tau);
  return cfg.copula == CopulaKind::Clayton ? CopulaFamily::clayton(eta)
                                           : CopulaFamily::gumbel(eta);
}

// Inverse survival: the t solving exp(-(lambda t)^k e^zeta) = u.
double inverse_survival(double u, double lambda, double k, double zeta) {
  return std::pow(-std::log(u), 1.0 / k) / (lambda * std::exp(zeta / k));
}

std::string zero_padded(const char* prefix, int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, value);
  return buf;
}

}  // namespace

const char* to_string(SignPattern sign) {
  switch (sign) {
    case SignPattern::Homogeneous: return "homogeneous";
    case SignPattern::Alternating: return "alternating";
  }
  return "?";
}

void validate_sim_config(const SimConfig& cfg) {
  auto fail = [](const char* what) { throw ConfigError(what); };
  if (cfg.n_subjects < 2) fail("simulation needs at least two subjects");
  if (cfg.n_variants < 2) fail("simulation needs at least two variants");
  if (cfg.copula == CopulaKind::Independence) {
    if (cfg.tau != 0.0) fail("Independence requires tau = 0");
  } else if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) {
    fail("tau must lie in (0,1)");
  }
  for (double v : {cfg.lambda1, cfg.k1, cfg.lambda2, cfg.k2})
    if (!(std::isfinite(v) && v > 0.0))
      fail("margin parameters must be finite and > 0");
  if (!(cfg.cov_sd >= 0.0)) fail("covariate sd must be >= 0");
  if (!(cfg.maf_lo > 0.0 && cfg.maf_lo <= cfg.maf_hi && cfg.maf_hi <= 0.5))
    fail("frequency range must satisfy 0 < lo <= hi <= 0.5");
  if (!(cfg.ld_decay >= 0.0)) fail("ld_decay must be >= 0");
  if (!(cfg.causal_fraction >= 0.0 && cfg.causal_fraction <= 1.0))
    fail("causal_fraction must lie in [0,1]");
  if (!(cfg.censor_target > 0.05 && cfg.censor_target < 0.95))
    fail("censor_target must lie in (0.05, 0.95)");
}

GenotypeData simulate_genotypes(const SimConfig& cfg, Rng& rng) {
  validate_sim_config(cfg);
  const int m = cfg.n_variants;
  const int n = cfg.n_subjects;

  GenotypeData out;
  out.region.name = "sim_region";

  // Variant coordinates: sorted uniforms scaled to a megabase-like span.
  std::vector<double> u(static_cast<std::size_t>(m));
  for (double& uj : u) uj = rng.uniform01();
  std::sort(u.begin(), u.end());
  for (std::size_t j = 1; j < u.size(); ++j)
    if (u[j] <= u[j - 1]) u[j] = std::nextafter(u[j - 1], 1.0);
  out.region.positions.resize(u.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    out.region.positions[j] = u[j] * 1e6;
  out.region.variant_ids.reserve(u.size());
  for (int j = 0; j < m; ++j)
    out.region.variant_ids.push_back(zero_padded("v", j + 1, 4));

  out.maf.resize(static_cast<std::size_t>(m));
  for (double& f : out.maf) f = rng.uniform(cfg.maf_lo, cfg.maf_hi);

  // Latent-Gaussian thresholds and linkage structure.
  Eigen::VectorXd thresholds(m);
  for (int j = 0; j < m; ++j)
    thresholds[j] = norm_quantile(out.maf[static_cast<std::size_t>(j)]);

  const std::vector<double> su = standardize_positions(out.region);
  Eigen::MatrixXd chol_lower;
  if (cfg.ld_decay > 0.0) {
    Eigen::MatrixXd corr(m, m);
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l)
        corr(j, l) = std::exp(-std::abs(su[static_cast<std::size_t>(j)] -
                                        su[static_cast<std::size_t>(l)]) /
                              cfg.ld_decay);
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success) {
      // The exponential kernel is strictly positive definite; regularize
      // only if rounding pushed an eigenvalue below zero.
      corr.diagonal().array() += 1e-10;
      llt.compute(corr);
      if (llt.info() != Eigen::Success)
        throw ConvergenceError("genotype correlation is not positive definite");
    }
    chol_lower = llt.matrixL();
  }

  out.dosages.resize(n, m);
  Eigen::VectorXd z(m);
  for (int i = 0; i < n; ++i) {
    out.dosages.row(i).setZero();
    for (int hap = 0; hap < 2; ++hap) {
      for (int j = 0; j < m; ++j) z[j] = rng.normal();
      if (cfg.ld_decay > 0.0) z = chol_lower * z;
      for (int j = 0; j < m; ++j)
        if (z[j] < thresholds[j]) out.dosages(i, j) += 1.0;
    }
  }
  return out;
}

GenotypeData simulate_genotypes(const SimConfig& cfg) {
  Rng rng = Rng::stream(cfg.seed, {kStreamGenotypes});
  return simulate_genotypes(cfg, rng);
}

std::vector<int> choose_causal(const SimConfig& cfg, Rng& rng) {
  validate_sim_config(cfg);
  const int m = cfg.n_variants;
  const int n_causal = static_cast<int>(
      std::llround(cfg.causal_fraction * static_cast<double>(m)));
  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) pool[static_cast<std::size_t>(j)] = j;
  // Partial Fisher-Yates.
  for (int j = 0; j < n_causal; ++j) {
    const auto pick = static_cast<std::size_t>(
        j + static_cast<int>(rng.uniform_int(
                static_cast<std::uint64_t>(m - j))));
    std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
  }
  std::vector<int> causal(pool.begin(), pool.begin() + n_causal);
  std::sort(causal.begin(), causal.end());
  return causal;
}

std::vector<double> effect_function(const std::vector<double>& maf,
                                    const std::vector<int>& causal,
                                    const SimConfig& cfg) {
  if (causal.empty() && cfg.causal_fraction > 0.0)
    throw ConfigError(
        "causal_fraction rounds to an empty causal set; raise the fraction "
        "or the variant count");
  std::vector<double> gamma(maf.size(), 0.0);
  // Alternating negates the second half of the causal set in position order:
  // one sign change across the region, so opposite-direction effects stay
  // representable by a smooth effect function while their signed sum
  // cancels.  (`causal` is sorted by construction.)
  const int n_positive =
      (static_cast<int>(causal.size()) + 1) / 2;
  int rank = 0;
  for (int j : causal) {
    if (j < 0 || static_cast<std::size_t>(j) >= maf.size())
      throw DomainError("effect_function: causal index out of range");
    double value =
        cfg.effect_c * std::abs(std::log10(maf[static_cast<std::size_t>(j)])) /
        2.0;
    if (cfg.sign == SignPattern::Alternating && rank >= n_positive)
      value = -value;
    gamma[static_cast<std::size_t>(j)] = value;
    ++rank;
  }
  return gamma;
}

namespace {

// One subject's generating draw: event times for both margins plus the two
// censoring fractions.  Draw order is fixed (copula pair, covariates,
// censoring fractions) so streams replay identically everywhere.
struct GeneratedSubject {
  double t1, t2;
  double x1, x2;
  double frac1, frac2;
};

GeneratedSubject draw_subject(const SimConfig& cfg, const CopulaFamily& fam,
                              const Eigen::Ref<const Eigen::RowVectorXd>& dose,
                              const std::vector<double>& gamma_effects,
                              Rng& rng) {
  GeneratedSubject s;
  const double v = rng.uniform01();
  const double w = rng.uniform01();
  const double u = h_inverse(fam, w, v);
  s.x1 = cfg.cov_mean + cfg.cov_sd * rng.normal();
  s.x2 = cfg.cov_mean + cfg.cov_sd * rng.normal();
  s.frac1 = rng.uniform01();
  s.frac2 = rng.uniform01();

  double genetic = 0.0;
  for (Eigen::Index j = 0; j < dose.size(); ++j)
    genetic += dose[j] * gamma_effects[static_cast<std::size_t>(j)];

  s.t1 = inverse_survival(u, cfg.lambda1, cfg.k1, cfg.beta1 * s.x1 + genetic);
  s.t2 = inverse_survival(v, cfg.lambda2, cfg.k2, cfg.beta2 * s.x2 + genetic);
  return s;
}

}  // namespace

double calibrate_censoring(const SimConfig& cfg, const GenotypeData& genotypes,
                           const std::vector<double>& gamma_effects,
                           Rng& rng) {
  validate_sim_config(cfg);
  if (gamma_effects.size() !=
      static_cast<std::size_t>(genotypes.dosages.cols()))
    throw DomainError("calibrate_censoring: effect vector size mismatch");

  const CopulaFamily fam = family_for(cfg);
  constexpr int kPseudo = 100000;
  std::vector<double> times;
  std::vector<double> fracs;
  times.reserve(2 * kPseudo);
  fracs.reserve(2 * kPseudo);
  const auto n_rows = static_cast<std::uint64_t>(genotypes.dosages.rows());
  for (int s = 0; s < kPseudo; ++s) {
    const auto row = static_cast<Eigen::Index>(rng.uniform_int(n_rows));
    const GeneratedSubject sub =
        draw_subject(cfg, fam, genotypes.dosages.row(row), gamma_effects, rng);
    times.push_back(sub.t1);
    fracs.push_back(sub.frac1);
    times.push_back(sub.t2);
    fracs.push_back(sub.frac2);
  }

  const auto rate = [&](double upper) {
    std::size_t censored = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] > upper * fracs[i]) ++censored;
    return static_cast<double>(censored) / static_cast<double>(times.size());
  };

  // rate() decreases in the upper bound; bracket then bisect.
  double lo = 0.0;
  double hi = 1.0;
  int expansions = 0;
  while (rate(hi) > cfg.censor_target) {
    hi *= 2.0;
    if (++expansions > 200)
      throw ConvergenceError("calibrate_censoring: cannot bracket the target");
  }
  for (int iter = 0; iter < 500; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double r = rate(mid);
    if (std::abs(r - cfg.censor_target) <= 0.005) return mid;
    if (r > cfg.censor_target)
      lo = mid;
    else
      hi = mid;
  }
  throw ConvergenceError("calibrate_censoring: bisection did not converge");
}

std::vector<SubjectRecord> simulate_phenotypes(
    const SimConfig& cfg, const GenotypeData& genotypes,
    const std::vector<double>& gamma_effects, Rng& rng,
    std::optional<double> censor_upper) {
  validate_sim_config(cfg);
  if (gamma_effects.size() !=
      static_cast<std::size_t>(genotypes.dosages.cols()))
    throw DomainError("simulate_phenotypes: effect vector size mismatch");

  double upper;
  if (censor_upper) {
    upper = *censor_upper;
    if (!(upper > 0.0))
      throw DomainError("simulate_phenotypes: censoring bound must be > 0");
  } else {
    Rng cal_rng = Rng::stream(cfg.seed, {kStreamCensoring});
    upper = calibrate_censoring(cfg, genotypes, gamma_effects, cal_rng);
  }

  const CopulaFamily fam = family_for(cfg);
  const auto n = static_cast<int>(genotypes.dosages.rows());
  const auto m = static_cast<std::size_t>(genotypes.dosages.cols());
  std::vector<SubjectRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const GeneratedSubject sub =
        draw_subject(cfg, fam, genotypes.dosages.row(i), gamma_effects, rng);
    SubjectRecord rec;
    rec.id = zero_padded("s", i + 1, 6);
    const double c1 = upper == kInf ? kInf : upper * sub.frac1;
    const double c2 = upper == kInf ? kInf : upper * sub.frac2;
    rec.d1 = sub.t1 <= c1;
    rec.d2 = sub.t2 <= c2;
    rec.y1 = rec.d1 ? sub.t1 : c1;
    rec.y2 = rec.d2 ? sub.t2 : c2;
    rec.covariates = {sub.x1};
    rec.genotypes.resize(m);
    for (std::size_t j = 0; j < m; ++j)
      rec.genotypes[j] = genotypes.dosages(i, static_cast<Eigen::Index>(j));
    records.push_back(std::move(rec));
  }
  return records;
}

SimulatedDataset simulate_dataset(const SimConfig& cfg) {
  SimulatedDataset out;
  out.genotypes = simulate_genotypes(cfg);
  Rng effect_rng = Rng::stream(cfg.seed, {kStreamEffects});
  out.causal = choose_causal(cfg, effect_rng);
  out.gamma_effects = effect_function(out.genotypes.maf, out.causal, cfg);
  Rng cal_rng = Rng::stream(cfg.seed, {kStreamCensoring});
  out.censor_upper =
      calibrate_censoring(cfg, out.genotypes, out.gamma_effects, cal_rng);
  Rng pheno_rng = Rng::stream(cfg.seed, {kStreamPhenotypes});
  out.records = simulate_phenotypes(cfg, out.genotypes, out.gamma_effects,
                                    pheno_rng, out.censor_upper);
  return out;
}

}  // namespace genecop
