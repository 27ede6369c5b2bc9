// Command-line front end: simulate datasets, test regions, and run the
// Monte Carlo calibration/power studies.

#include <CLI11.hpp>
#include <cstdio>
#include <map>
#include <string>

#include "genecop/harness.hpp"

namespace {

using genecop::BasisFamily;
using genecop::CopulaKind;
using genecop::FlmMode;
using genecop::SignPattern;

const std::map<std::string, CopulaKind> kCopulaNames{
    {"clayton", CopulaKind::Clayton},
    {"gumbel", CopulaKind::Gumbel},
    {"independence", CopulaKind::Independence}};
const std::map<std::string, FlmMode> kFlmNames{
    {"smooth-both", FlmMode::SmoothBoth},
    {"smooth-effect-only", FlmMode::SmoothEffectOnly}};
const std::map<std::string, BasisFamily> kBasisNames{
    {"bspline", BasisFamily::BSpline}, {"fourier", BasisFamily::Fourier}};
const std::map<std::string, SignPattern> kSignNames{
    {"homogeneous", SignPattern::Homogeneous},
    {"alternating", SignPattern::Alternating}};

void add_sim_options(CLI::App* cmd, genecop::SimConfig& sim) {
  cmd->add_option("--seed", sim.seed, "Random seed");
  cmd->add_option("--n", sim.n_subjects, "Subjects per replicate");
  cmd->add_option("--variants", sim.n_variants, "Variants in the region");
  cmd->add_option("--copula", sim.copula, "Generating copula family")
      ->transform(CLI::CheckedTransformer(kCopulaNames, CLI::ignore_case));
  cmd->add_option("--tau", sim.tau, "Generating Kendall tau");
  cmd->add_option("--lambda1", sim.lambda1, "Margin-1 Weibull scale");
  cmd->add_option("--k1", sim.k1, "Margin-1 Weibull shape");
  cmd->add_option("--lambda2", sim.lambda2, "Margin-2 Weibull scale");
  cmd->add_option("--k2", sim.k2, "Margin-2 Weibull shape");
  cmd->add_option("--cov-mean", sim.cov_mean, "Covariate mean");
  cmd->add_option("--cov-sd", sim.cov_sd, "Covariate standard deviation");
  cmd->add_option("--beta1", sim.beta1, "Margin-1 covariate effect");
  cmd->add_option("--beta2", sim.beta2, "Margin-2 covariate effect");
  cmd->add_option("--maf-lo", sim.maf_lo, "Lower allele-frequency bound");
  cmd->add_option("--maf-hi", sim.maf_hi, "Upper allele-frequency bound");
  cmd->add_option("--ld-decay", sim.ld_decay,
                  "Linkage correlation length (standardized units)");
  cmd->add_option("--censor", sim.censor_target, "Target censoring fraction");
}

void add_effect_options(CLI::App* cmd, genecop::SimConfig& sim) {
  cmd->add_option("--causal", sim.causal_fraction,
                  "Fraction of causal variants");
  cmd->add_option("--c", sim.effect_c, "Effect-size constant");
  cmd->add_option("--sign", sim.sign, "Causal sign pattern")
      ->transform(CLI::CheckedTransformer(kSignNames, CLI::ignore_case));
}

void add_analysis_options(CLI::App* cmd, genecop::AnalysisOptions& a) {
  cmd->add_option("--analysis-copula", a.copula, "Working copula family")
      ->transform(CLI::CheckedTransformer(kCopulaNames, CLI::ignore_case));
  cmd->add_option("--flm-mode", a.flm_mode, "Functional design mode")
      ->transform(CLI::CheckedTransformer(kFlmNames, CLI::ignore_case));
  cmd->add_option("--basis", a.basis_family, "Basis family")
      ->transform(CLI::CheckedTransformer(kBasisNames, CLI::ignore_case));
  cmd->add_option("--n-basis", a.n_basis, "Effect-function basis size");
  cmd->add_option("--order", a.bspline_order, "B-spline order");
  cmd->add_option("--gvf-n-basis", a.gvf_n_basis,
                  "Genotype smoother basis size (smooth-both)");
  cmd->add_option("--max-iter", a.opt.max_iter, "Optimizer iteration cap");
  cmd->add_option("--grad-tol", a.opt.grad_tol,
                  "Optimizer gradient tolerance");
}

void print_summary(const genecop::RunReport& rep) {
  std::printf("command: %s   seed: %llu   config: %s\n", rep.command.c_str(),
              static_cast<unsigned long long>(rep.seed),
              rep.config_hash.c_str());
  for (const auto& w : rep.warnings)
    std::printf("warning: %s\n", w.c_str());
  if (!rep.summary.empty()) {
    std::printf("%-20s %8s %8s %8s %8s %10s %10s\n", "method", "alpha",
                "n_used", "n_fail", "n_rej", "rate", "mc_se");
    for (const auto& s : rep.summary)
      std::printf("%-20s %8.4g %8d %8d %8d %10.4f %10.4f\n",
                  s.method.c_str(), s.alpha, s.n_used, s.n_failed, s.n_reject,
                  s.rate, s.mc_se);
  }
}

void print_rows(const genecop::RunReport& rep) {
  std::printf("%-24s %-20s %4s %12s %12s %4s %3s  %s\n", "dataset", "method",
              "df", "statistic", "p_value", "sing", "ok", "note");
  for (const auto& r : rep.rows)
    std::printf("%-24s %-20s %4d %12.6g %12.6g %4d %3d  %s\n",
                r.dataset.c_str(), r.method.c_str(), r.df, r.statistic,
                r.p_value, r.singular ? 1 : 0, r.ok ? 1 : 0,
                r.note.empty() ? "-" : r.note.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "genecop: gene-based association tests for bivariate censored "
      "survival traits"};
  app.require_subcommand(1);

  // --- simulate ----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Generate a synthetic dataset in the three-file format");
  genecop::SimConfig sim_cfg;
  std::string sim_out;
  add_sim_options(sim_cmd, sim_cfg);
  add_effect_options(sim_cmd, sim_cfg);
  sim_cmd->add_option("--out", sim_out, "Output file prefix")->required();

  // --- test ---------------------------------------------------------------
  auto* test_cmd = app.add_subcommand(
      "test", "Run region association tests on a loaded dataset");
  genecop::TestConfig test_cfg;
  std::string test_out;
  test_cmd->add_option("--pheno", test_cfg.pheno_path, "Phenotype file")
      ->required();
  test_cmd->add_option("--geno", test_cfg.geno_path, "Genotype file")
      ->required();
  test_cmd->add_option("--regions", test_cfg.regions_path, "Regions file")
      ->required();
  test_cmd->add_option("--flank", test_cfg.flank,
                       "Assignment window around each region");
  test_cmd->add_option("--min-variants", test_cfg.min_variants,
                       "Minimum matched variants per region");
  test_cmd->add_flag("--lrt,!--no-lrt", test_cfg.with_lrt,
                     "Also report the likelihood-ratio test");
  test_cmd->add_flag("--univariate", test_cfg.with_univariate,
                     "Also report the margin-1 univariate test");
  test_cmd->add_option("--curve-points", test_cfg.curve_points,
                       "Samples of the fitted effect curve");
  test_cmd->add_option("--threads", test_cfg.threads, "Worker threads");
  test_cmd->add_option("--seed", test_cfg.seed, "Seed stamp for the report");
  add_analysis_options(test_cmd, test_cfg.analysis);
  test_cmd->add_option("--out", test_out, "Output file prefix");

  // --- type1 ---------------------------------------------------------------
  auto* t1_cmd = app.add_subcommand(
      "type1", "Monte Carlo null-calibration study");
  genecop::Type1Config t1_cfg;
  std::string t1_out;
  add_sim_options(t1_cmd, t1_cfg.sim);
  add_analysis_options(t1_cmd, t1_cfg.analysis);
  t1_cmd->add_option("--genotype-sets", t1_cfg.genotype_sets,
                     "Genotype sets");
  t1_cmd->add_option("--phenotype-sets", t1_cfg.phenotype_sets,
                     "Phenotype replicates per genotype set");
  t1_cmd->add_flag("--lrt,!--no-lrt", t1_cfg.with_lrt,
                   "Also run the likelihood-ratio test");
  t1_cmd->add_flag("--with-independence", t1_cfg.with_independence,
                   "Also run the independence-working-model baseline");
  t1_cmd->add_flag("--with-univariate", t1_cfg.with_univariate,
                   "Also run the margin-1 univariate test");
  t1_cmd->add_option("--alpha-levels", t1_cfg.alphas,
                     "Rejection levels (comma separated)")
      ->delimiter(',');
  t1_cmd->add_option("--max-fail", t1_cfg.max_fail_frac,
                     "Tolerated convergence-failure fraction");
  t1_cmd->add_option("--threads", t1_cfg.threads, "Worker threads");
  t1_cmd->add_option("--out", t1_out, "Output file prefix");

  // --- power ----------------------------------------------------------------
  auto* pw_cmd = app.add_subcommand("power", "Monte Carlo power study");
  genecop::PowerConfig pw_cfg;
  std::string pw_out;
  add_sim_options(pw_cmd, pw_cfg.sim);
  add_effect_options(pw_cmd, pw_cfg.sim);
  add_analysis_options(pw_cmd, pw_cfg.analysis);
  pw_cmd->add_option("--genotype-sets", pw_cfg.genotype_sets, "Genotype sets");
  pw_cmd->add_option("--phenotype-sets", pw_cfg.phenotype_sets,
                     "Phenotype replicates per genotype set");
  pw_cmd->add_flag("--lrt,!--no-lrt", pw_cfg.with_lrt,
                   "Also run the likelihood-ratio test");
  pw_cmd->add_flag("--with-independence", pw_cfg.with_independence,
                   "Also run the independence-working-model baseline");
  pw_cmd->add_flag("--with-univariate,!--no-univariate", pw_cfg.with_univariate,
                   "Also run the margin-1 univariate test");
  pw_cmd->add_option("--alpha-levels", pw_cfg.alphas,
                     "Rejection levels (comma separated)")
      ->delimiter(',');
  pw_cmd->add_option("--max-fail", pw_cfg.max_fail_frac,
                     "Tolerated convergence-failure fraction");
  pw_cmd->add_option("--threads", pw_cfg.threads, "Worker threads");
  pw_cmd->add_option("--out", pw_out, "Output file prefix");

  // One top-level config file; keys live in [simulate]/[test]/[type1]/[power]
  // sections and command-line flags win over file values.
  app.set_config("--config", "", "Read options from an INI file (sections per subcommand)");
  app.get_config_ptr()->configurable(false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed()) {
      const genecop::SimulatedDataset ds = genecop::simulate_dataset(sim_cfg);
      genecop::write_dataset(sim_out, ds.records, ds.genotypes.region);
      int events1 = 0, events2 = 0;
      for (const auto& rec : ds.records) {
        events1 += rec.d1 ? 1 : 0;
        events2 += rec.d2 ? 1 : 0;
      }
      std::printf(
          "wrote %s.{pheno,geno,regions}.tsv: %zu subjects, %d variants, "
          "%zu causal, censoring bound %.6g, events %d/%d\n",
          sim_out.c_str(), ds.records.size(), sim_cfg.n_variants,
          ds.causal.size(), ds.censor_upper, events1, events2);
      return 0;
    }

    genecop::RunReport rep;
    std::string out;
    if (test_cmd->parsed()) {
      rep = genecop::cmd_test(test_cfg);
      out = test_out;
      print_rows(rep);
    } else if (t1_cmd->parsed()) {
      rep = genecop::cmd_type1(t1_cfg);
      out = t1_out;
    } else {
      rep = genecop::cmd_power(pw_cfg);
      out = pw_out;
    }
    print_summary(rep);
    if (!out.empty()) {
      rep.write(out);
      std::printf("wrote %s.{rows,summary%s}.tsv and %s.config.txt\n",
                  out.c_str(), rep.curves.empty() ? "" : ",curves",
                  out.c_str());
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
