#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "genecop/copula.hpp"
#include "genecop/rng.hpp"
#include "genecop/types.hpp"

namespace genecop {

/// Sign layout of the causal effects along the region: all positive, or
/// alternating in position order.
enum class SignPattern { Homogeneous, Alternating };

const char* to_string(SignPattern sign);

/// Scenario description for the simulation engine.  Margins are Weibull with
/// baseline survival exp(-(lambda t)^k); each margin receives its own
/// N(cov_mean, cov_sd^2) covariate; the two event times are coupled through
/// `copula` at Kendall tau `tau`; genotypes follow a latent-Gaussian
/// threshold model with exponentially decaying linkage along the region.
struct SimConfig {
  std::uint64_t seed = 1;
  int n_subjects = 500;
  int n_variants = 100;

  CopulaKind copula = CopulaKind::Clayton;
  double tau = 0.4;  // must be 0 when copula == Independence

  double lambda1 = 0.1, k1 = 2.0;
  double lambda2 = 0.1, k2 = 2.0;

  double cov_mean = 6.0, cov_sd = 2.0;
  double beta1 = 0.0, beta2 = 0.0;

  double maf_lo = 0.05, maf_hi = 0.5;
  double ld_decay = 0.1;  // correlation length in standardized position units

  double causal_fraction = 0.0;
  double effect_c = 0.0;
  SignPattern sign = SignPattern::Homogeneous;

  double censor_target = 0.5;
};

void validate_sim_config(const SimConfig& cfg);

/// Substream tags: every stage of a simulation derives its own stream from
/// (seed, tag, indices...), so results are independent of evaluation order.
inline constexpr std::uint64_t kStreamGenotypes = 1;
inline constexpr std::uint64_t kStreamEffects = 2;
inline constexpr std::uint64_t kStreamCensoring = 3;
inline constexpr std::uint64_t kStreamPhenotypes = 4;

/// One simulated genotype set: region coordinates, generating minor-allele
/// frequencies, and an n_subjects x n_variants dosage matrix.
struct GenotypeData {
  GeneRegion region;
  std::vector<double> maf;
  Eigen::MatrixXd dosages;
};

/// Draws variant positions, frequencies, and dosages.  Each of the two
/// haplotypes per subject thresholds a latent Gaussian vector with
/// correlation exp(-|u_j - u_l| / ld_decay) between standardized positions
/// (ld_decay == 0 gives independent variants).
GenotypeData simulate_genotypes(const SimConfig& cfg, Rng& rng);
GenotypeData simulate_genotypes(const SimConfig& cfg);

/// Uniformly sampled causal subset of {0,...,n_variants-1}, sorted;
/// round(causal_fraction * n_variants) variants.
std::vector<int> choose_causal(const SimConfig& cfg, Rng& rng);

/// Variant-level generating effects: zero off the causal set, and
/// +/- effect_c * |log10 MAF_j| / 2 on it, signs per `cfg.sign`.
/// Homogeneous keeps every causal effect positive; Alternating models
/// opposite-direction effects within the gene by negating the second half
/// of the causal variants in position order, so the generating effect
/// function changes sign once across the region (a signed burden of the
/// causal effects still cancels to near zero).
std::vector<double> effect_function(const std::vector<double>& maf,
                                    const std::vector<int>& causal,
                                    const SimConfig& cfg);

/// Upper bound C such that independent U(0,C) censoring yields the target
/// censoring fraction within +/-0.005, found by bisection against one fixed
/// pseudo-sample of 1e5 subjects drawn from the full generating model.
/// Throws ConvergenceError if the target cannot be bracketed.
double calibrate_censoring(const SimConfig& cfg, const GenotypeData& genotypes,
                           const std::vector<double>& gamma_effects, Rng& rng);

/// Draws one phenotype replicate on top of an existing genotype set.
/// Event-time pairs come from conditional-inversion sampling of the copula
/// followed by Weibull inverse-survival transforms; each margin is censored
/// at an independent U(0, censor_upper) time.  When `censor_upper` is
/// absent it is calibrated on the spot (fresh censoring stream).  Pass
/// +infinity for uncensored data.
std::vector<SubjectRecord> simulate_phenotypes(
    const SimConfig& cfg, const GenotypeData& genotypes,
    const std::vector<double>& gamma_effects, Rng& rng,
    std::optional<double> censor_upper = {});

/// One-shot convenience: genotypes, causal set, effects, calibration, and a
/// single phenotype replicate, all from cfg.seed.
struct SimulatedDataset {
  GenotypeData genotypes;
  std::vector<int> causal;
  std::vector<double> gamma_effects;
  double censor_upper = 0.0;
  std::vector<SubjectRecord> records;
};

SimulatedDataset simulate_dataset(const SimConfig& cfg);

}  // namespace genecop
