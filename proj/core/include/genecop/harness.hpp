#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genecop/inference.hpp"
#include "genecop/io.hpp"
#include "genecop/simulate.hpp"

namespace genecop {

/// Working-model knobs shared by every analysis command.
struct AnalysisOptions {
  CopulaKind copula = CopulaKind::Clayton;
  FlmMode flm_mode = FlmMode::SmoothEffectOnly;
  BasisFamily basis_family = BasisFamily::BSpline;
  int n_basis = 5;        // effect-function basis size (tested block)
  int bspline_order = 4;
  int gvf_n_basis = 10;   // genotype smoother size (SmoothBoth only)
  OptimizerConfig opt;
};

/// Materializes the ModelSpec for these options (validated).
ModelSpec make_model_spec(const AnalysisOptions& options);

/// One test outcome (or recorded failure) on one dataset/replicate.
struct ReportRow {
  std::string dataset;  // region name, or replicate tag g###.p####
  std::string method;   // joint-score, joint-lrt, independence-score, ...
  int df = 0;
  double statistic = 0.0;
  double p_value = std::numeric_limits<double>::quiet_NaN();
  bool singular = false;
  bool ok = false;  // false = this method failed on this replicate
  std::string note;
};

/// Rejection summary for one method at one level.
struct SummaryRow {
  std::string method;
  double alpha = 0.0;
  int n_used = 0;
  int n_failed = 0;
  int n_reject = 0;
  double rate = 0.0;
  double mc_se = 0.0;
};

/// Estimated effect curve sample point for one region.
struct CurvePoint {
  std::string dataset;
  double u = 0.0;
  double value = 0.0;
};

/// Everything a command produces.  `config_text` is the canonical key=value
/// rendering of the effective configuration and `config_hash` its 64-bit
/// FNV-1a in hex; both are stamped on every output row so result files are
/// self-identifying.
struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_text;
  std::string config_hash;
  std::vector<ReportRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<CurvePoint> curves;
  std::vector<std::string> warnings;

  /// Writes <prefix>.rows.tsv, <prefix>.summary.tsv, <prefix>.curves.tsv
  /// (when non-empty) and <prefix>.config.txt.
  void write(const std::string& prefix) const;
};

/// Monte Carlo null-calibration study: `genotype_sets` genotype draws, each
/// analyzed over `phenotype_sets` fresh phenotype replicates with the
/// genetic effect held at zero.  Throws ConfigError if the scenario
/// requests causal effects, and ConvergenceError if any method fails on
/// more than `max_fail_frac` of its replicates.
struct Type1Config {
  SimConfig sim;
  int genotype_sets = 10;
  int phenotype_sets = 100;
  AnalysisOptions analysis;
  bool with_lrt = true;
  bool with_independence = false;
  bool with_univariate = false;
  std::vector<double> alphas = {0.05, 0.01};
  double max_fail_frac = 0.05;
  int threads = 1;
};

RunReport cmd_type1(const Type1Config& cfg);

/// Monte Carlo power study: same engine with the configured causal effects
/// switched on.  Throws ConfigError unless the scenario actually has
/// effects (causal_fraction > 0 and effect_c != 0).
struct PowerConfig {
  SimConfig sim;
  int genotype_sets = 10;
  int phenotype_sets = 50;
  AnalysisOptions analysis;
  bool with_lrt = false;
  bool with_independence = false;
  bool with_univariate = true;
  std::vector<double> alphas = {0.05};
  double max_fail_frac = 0.05;
  int threads = 1;
};

RunReport cmd_power(const PowerConfig& cfg);

/// File-based association analysis: loads the three-file dataset, tests
/// every region with at least `min_variants` matched variants (smaller
/// regions are reported as skipped), and samples the fitted effect curve at
/// `curve_points` positions per region.
struct TestConfig {
  std::string pheno_path;
  std::string geno_path;
  std::string regions_path;
  double flank = 5000.0;
  int min_variants = 10;
  AnalysisOptions analysis;
  bool with_lrt = true;
  bool with_univariate = false;
  int curve_points = 200;
  int threads = 1;
  std::uint64_t seed = 0;  // stamped on the report; analysis is deterministic
};

RunReport cmd_test(const TestConfig& cfg);

/// 64-bit FNV-1a, exposed for tests and tooling.
std::uint64_t fnv1a64(const std::string& text);

}  // namespace genecop
