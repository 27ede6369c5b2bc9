#include "genecop/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "genecop/basis.hpp"
#include "genecop/parallel.hpp"

namespace genecop {

namespace {

std::string fmt(double v, const char* f = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

// Canonical key=value configuration rendering (sorted by key) that the
// config hash is computed over.  Keys that cannot change the numbers (for
// example the thread count) are deliberately left out.
class ConfigText {
 public:
  void add(const std::string& key, const std::string& value) {
    items_.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add(const std::string& key, int value) {
    add(key, std::to_string(value));
  }
  void add(const std::string& key, std::uint64_t value) {
    add(key, std::to_string(value));
  }
  void add(const std::string& key, bool value) {
    add(key, std::string(value ? "1" : "0"));
  }
  void add(const std::string& key, const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ",";
      s += fmt(values[i]);
    }
    add(key, s);
  }

  std::string canonical() const {
    auto sorted = items_;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (const auto& [k, v] : sorted) out += k + "=" + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

void add_sim(ConfigText& c, const SimConfig& sim) {
  c.add("sim.seed", sim.seed);
  c.add("sim.n_subjects", sim.n_subjects);
  c.add("sim.n_variants", sim.n_variants);
  c.add("sim.copula", std::string(to_string(sim.copula)));
  c.add("sim.tau", sim.tau);
  c.add("sim.lambda1", sim.lambda1);
  c.add("sim.k1", sim.k1);
  c.add("sim.lambda2", sim.lambda2);
  c.add("sim.k2", sim.k2);
  c.add("sim.cov_mean", sim.cov_mean);
  c.add("sim.cov_sd", sim.cov_sd);
  c.add("sim.beta1", sim.beta1);
  c.add("sim.beta2", sim.beta2);
  c.add("sim.maf_lo", sim.maf_lo);
  c.add("sim.maf_hi", sim.maf_hi);
  c.add("sim.ld_decay", sim.ld_decay);
  c.add("sim.causal_fraction", sim.causal_fraction);
  c.add("sim.effect_c", sim.effect_c);
  c.add("sim.sign", std::string(to_string(sim.sign)));
  c.add("sim.censor_target", sim.censor_target);
}

void add_analysis(ConfigText& c, const AnalysisOptions& a) {
  c.add("analysis.copula", std::string(to_string(a.copula)));
  c.add("analysis.flm_mode", std::string(to_string(a.flm_mode)));
  c.add("analysis.basis", std::string(to_string(a.basis_family)));
  c.add("analysis.n_basis", a.n_basis);
  c.add("analysis.bspline_order", a.bspline_order);
  c.add("analysis.gvf_n_basis", a.gvf_n_basis);
  c.add("opt.max_iter", a.opt.max_iter);
  c.add("opt.grad_tol", a.opt.grad_tol);
  c.add("opt.base_step", a.opt.base_step);
}

ReportRow make_row(const std::string& dataset, const std::string& method,
                   const TestResult& t) {
  ReportRow row;
  row.dataset = dataset;
  row.method = method;
  row.df = t.df;
  row.statistic = t.statistic;
  row.p_value = t.p_value;
  row.singular = t.singular;
  row.ok = true;
  row.note = t.note;
  return row;
}

ReportRow failed_row(const std::string& dataset, const std::string& method,
                     const std::string& note) {
  ReportRow row;
  row.dataset = dataset;
  row.method = method;
  row.ok = false;
  row.note = note;
  return row;
}

void finalize_report(RunReport& rep, const std::vector<std::string>& methods,
                     const std::vector<double>& alphas, double max_fail_frac) {
  std::vector<std::string> gate_failures;
  for (const auto& method : methods) {
    int used = 0, failed = 0;
    std::vector<int> rejections(alphas.size(), 0);
    for (const auto& row : rep.rows) {
      if (row.method != method) continue;
      if (!row.ok || !std::isfinite(row.p_value)) {
        ++failed;
        continue;
      }
      ++used;
      for (std::size_t a = 0; a < alphas.size(); ++a)
        if (row.p_value <= alphas[a]) ++rejections[a];
    }
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      SummaryRow s;
      s.method = method;
      s.alpha = alphas[a];
      s.n_used = used;
      s.n_failed = failed;
      s.n_reject = rejections[a];
      s.rate = used > 0 ? static_cast<double>(rejections[a]) / used : 0.0;
      s.mc_se = used > 0 ? std::sqrt(s.rate * (1.0 - s.rate) / used) : 0.0;
      rep.summary.push_back(std::move(s));
    }
    const int total = used + failed;
    if (total > 0 &&
        static_cast<double>(failed) > max_fail_frac * total)
      gate_failures.push_back(method + " failed on " +
                              std::to_string(failed) + "/" +
                              std::to_string(total) + " replicates");
  }
  if (!gate_failures.empty()) {
    std::string msg = "convergence failure rate above the acceptable bound: ";
    for (std::size_t i = 0; i < gate_failures.size(); ++i) {
      if (i) msg += "; ";
      msg += gate_failures[i];
    }
    throw ConvergenceError(msg);
  }
}

struct McPlan {
  const char* command = "";
  SimConfig sim;
  int genotype_sets = 1;
  int phenotype_sets = 1;
  AnalysisOptions analysis;
  bool with_lrt = false;
  bool with_independence = false;
  bool with_univariate = false;
  bool with_effects = false;
  std::vector<double> alphas;
  double max_fail_frac = 0.05;
  int threads = 1;
};

RunReport run_mc(const McPlan& plan) {
  validate_sim_config(plan.sim);
  if (plan.genotype_sets < 1 || plan.phenotype_sets < 1)
    throw ConfigError("need at least one genotype and one phenotype set");
  if (plan.alphas.empty()) throw ConfigError("need at least one alpha level");
  for (double a : plan.alphas)
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha must lie in (0,1)");

  const ModelSpec spec = make_model_spec(plan.analysis);
  ModelSpec spec_ind = spec;
  spec_ind.copula = CopulaKind::Independence;

  const int n_geno = plan.genotype_sets;
  const int n_pheno = plan.phenotype_sets;

  struct GenoSet {
    GenotypeData geno;
    std::vector<double> gamma;
    double censor_upper = 0.0;
    Eigen::MatrixXd design_rows;
  };
  std::vector<GenoSet> sets(static_cast<std::size_t>(n_geno));
  for (int g = 0; g < n_geno; ++g) {
    auto& set = sets[static_cast<std::size_t>(g)];
    Rng geno_rng = Rng::stream(
        plan.sim.seed, {kStreamGenotypes, static_cast<std::uint64_t>(g)});
    set.geno = simulate_genotypes(plan.sim, geno_rng);
    if (plan.with_effects) {
      Rng effect_rng = Rng::stream(
          plan.sim.seed, {kStreamEffects, static_cast<std::uint64_t>(g)});
      set.gamma = effect_function(set.geno.maf,
                                  choose_causal(plan.sim, effect_rng),
                                  plan.sim);
    } else {
      set.gamma.assign(static_cast<std::size_t>(plan.sim.n_variants), 0.0);
    }
    Rng cens_rng = Rng::stream(
        plan.sim.seed, {kStreamCensoring, static_cast<std::uint64_t>(g)});
    set.censor_upper =
        calibrate_censoring(plan.sim, set.geno, set.gamma, cens_rng);

    // The functional design depends only on the genotypes, so it is shared
    // by every phenotype replicate of this set.
    std::vector<SubjectRecord> shells(
        static_cast<std::size_t>(set.geno.dosages.rows()));
    for (Eigen::Index i = 0; i < set.geno.dosages.rows(); ++i) {
      auto& rec = shells[static_cast<std::size_t>(i)];
      rec.id = "shell";
      rec.y1 = rec.y2 = 1.0;
      rec.genotypes.resize(static_cast<std::size_t>(set.geno.dosages.cols()));
      for (Eigen::Index j = 0; j < set.geno.dosages.cols(); ++j)
        rec.genotypes[static_cast<std::size_t>(j)] = set.geno.dosages(i, j);
    }
    set.design_rows = build_design(shells, set.geno.region, spec).rows;
  }

  const std::size_t total =
      static_cast<std::size_t>(n_geno) * static_cast<std::size_t>(n_pheno);
  std::vector<std::vector<ReportRow>> buffers(total);

  parallel_for(total, plan.threads, [&](std::size_t r) {
    const int g = static_cast<int>(r) / n_pheno;
    const int p = static_cast<int>(r) % n_pheno;
    const auto& set = sets[static_cast<std::size_t>(g)];
    char tag_buf[32];
    std::snprintf(tag_buf, sizeof tag_buf, "g%03d.p%04d", g + 1, p + 1);
    const std::string tag = tag_buf;
    auto& rows = buffers[r];

    Rng pheno_rng =
        Rng::stream(plan.sim.seed,
                    {kStreamPhenotypes, static_cast<std::uint64_t>(g),
                     static_cast<std::uint64_t>(p)});
    const std::vector<SubjectRecord> records = simulate_phenotypes(
        plan.sim, set.geno, set.gamma, pheno_rng, set.censor_upper);

    DesignMatrix design;
    design.rows = set.design_rows;
    design.mode = spec.flm_mode;
    const LikelihoodData data = LikelihoodData::build(records, design);

    FitResult null_fit;
    bool have_null = false;
    try {
      FitOptions options;
      options.opt = plan.analysis.opt;
      options.restrict_gamma = true;
      null_fit = fit_mle(spec, data, LikelihoodScope::Bivariate, options);
      if (!null_fit.converged)
        throw ConvergenceError("null fit did not converge");
      have_null = true;
      rows.push_back(make_row(tag, "joint-score", score_test_at(null_fit)));
    } catch (const Error& e) {
      rows.push_back(failed_row(tag, "joint-score", e.what()));
    }

    if (plan.with_lrt) {
      if (!have_null) {
        rows.push_back(failed_row(tag, "joint-lrt", "null fit unavailable"));
      } else {
        try {
          FitOptions options;
          options.opt = plan.analysis.opt;
          options.init = null_fit.params;
          const FitResult alt_fit =
              fit_mle(spec, data, LikelihoodScope::Bivariate, options);
          rows.push_back(
              make_row(tag, "joint-lrt", lrt_pair(null_fit, alt_fit)));
        } catch (const Error& e) {
          rows.push_back(failed_row(tag, "joint-lrt", e.what()));
        }
      }
    }

    if (plan.with_independence) {
      try {
        FitOptions options;
        options.opt = plan.analysis.opt;
        options.restrict_gamma = true;
        const FitResult ind_fit =
            fit_mle(spec_ind, data, LikelihoodScope::Bivariate, options);
        if (!ind_fit.converged)
          throw ConvergenceError("null fit did not converge");
        rows.push_back(
            make_row(tag, "independence-score", score_test_at(ind_fit)));
      } catch (const Error& e) {
        rows.push_back(failed_row(tag, "independence-score", e.what()));
      }
    }

    if (plan.with_univariate) {
      try {
        FitOptions options;
        options.opt = plan.analysis.opt;
        options.restrict_gamma = true;
        const FitResult uni_fit =
            fit_mle(spec, data, LikelihoodScope::Margin1, options);
        if (!uni_fit.converged)
          throw ConvergenceError("null fit did not converge");
        rows.push_back(
            make_row(tag, "margin1-score", score_test_at(uni_fit)));
      } catch (const Error& e) {
        rows.push_back(failed_row(tag, "margin1-score", e.what()));
      }
    }
  });

  RunReport rep;
  rep.command = plan.command;
  rep.seed = plan.sim.seed;
  ConfigText c;
  c.add("command", std::string(plan.command));
  add_sim(c, plan.sim);
  add_analysis(c, plan.analysis);
  c.add("genotype_sets", plan.genotype_sets);
  c.add("phenotype_sets", plan.phenotype_sets);
  c.add("with_lrt", plan.with_lrt);
  c.add("with_independence", plan.with_independence);
  c.add("with_univariate", plan.with_univariate);
  c.add("alphas", plan.alphas);
  c.add("max_fail_frac", plan.max_fail_frac);
  rep.config_text = c.canonical();
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(rep.config_text)));
    rep.config_hash = buf;
  }

  std::vector<std::string> methods{"joint-score"};
  if (plan.with_lrt) methods.push_back("joint-lrt");
  if (plan.with_independence) methods.push_back("independence-score");
  if (plan.with_univariate) methods.push_back("margin1-score");

  for (auto& buf : buffers)
    for (auto& row : buf) rep.rows.push_back(std::move(row));

  finalize_report(rep, methods, plan.alphas, plan.max_fail_frac);
  return rep;
}

}  // namespace

ModelSpec make_model_spec(const AnalysisOptions& options) {
  ModelSpec spec;
  spec.copula = options.copula;
  spec.flm_mode = options.flm_mode;
  if (options.basis_family == BasisFamily::BSpline) {
    spec.gef_basis = BasisSpec::bspline(options.n_basis, options.bspline_order);
    spec.gvf_basis =
        BasisSpec::bspline(options.gvf_n_basis, options.bspline_order);
  } else {
    spec.gef_basis = BasisSpec::fourier(options.n_basis);
    spec.gvf_basis = BasisSpec::fourier(options.gvf_n_basis);
  }
  validate_model_spec(spec);
  return spec;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunReport cmd_type1(const Type1Config& cfg) {
  if (cfg.sim.causal_fraction != 0.0 || cfg.sim.effect_c != 0.0)
    throw ConfigError(
        "null calibration runs with the genetic effect at zero; clear "
        "causal_fraction and effect_c");
  McPlan plan;
  plan.command = "type1";
  plan.sim = cfg.sim;
  plan.genotype_sets = cfg.genotype_sets;
  plan.phenotype_sets = cfg.phenotype_sets;
  plan.analysis = cfg.analysis;
  plan.with_lrt = cfg.with_lrt;
  plan.with_independence = cfg.with_independence;
  plan.with_univariate = cfg.with_univariate;
  plan.with_effects = false;
  plan.alphas = cfg.alphas;
  plan.max_fail_frac = cfg.max_fail_frac;
  plan.threads = cfg.threads;
  return run_mc(plan);
}

RunReport cmd_power(const PowerConfig& cfg) {
  if (!(cfg.sim.causal_fraction > 0.0) || cfg.sim.effect_c == 0.0)
    throw ConfigError(
        "power runs need causal_fraction > 0 and a non-zero effect_c");
  McPlan plan;
  plan.command = "power";
  plan.sim = cfg.sim;
  plan.genotype_sets = cfg.genotype_sets;
  plan.phenotype_sets = cfg.phenotype_sets;
  plan.analysis = cfg.analysis;
  plan.with_lrt = cfg.with_lrt;
  plan.with_independence = cfg.with_independence;
  plan.with_univariate = cfg.with_univariate;
  plan.with_effects = true;
  plan.alphas = cfg.alphas;
  plan.max_fail_frac = cfg.max_fail_frac;
  plan.threads = cfg.threads;
  return run_mc(plan);
}

RunReport cmd_test(const TestConfig& cfg) {
  if (cfg.min_variants < 2)
    throw ConfigError("min_variants must be at least 2");
  if (cfg.curve_points < 2)
    throw ConfigError("curve_points must be at least 2");
  const ModelSpec spec = make_model_spec(cfg.analysis);

  const LoadedDataset ds =
      load_dataset(cfg.pheno_path, cfg.geno_path, cfg.regions_path, cfg.flank);

  RunReport rep;
  rep.command = "test";
  rep.seed = cfg.seed;
  rep.warnings = ds.warnings;

  ConfigText c;
  c.add("command", std::string("test"));
  c.add("pheno", cfg.pheno_path);
  c.add("geno", cfg.geno_path);
  c.add("regions", cfg.regions_path);
  c.add("flank", cfg.flank);
  c.add("min_variants", cfg.min_variants);
  c.add("curve_points", cfg.curve_points);
  c.add("with_lrt", cfg.with_lrt);
  c.add("with_univariate", cfg.with_univariate);
  c.add("seed", cfg.seed);
  add_analysis(c, cfg.analysis);
  rep.config_text = c.canonical();
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(rep.config_text)));
    rep.config_hash = buf;
  }

  // Curve evaluation grid, shared by all regions.
  std::vector<double> grid(static_cast<std::size_t>(cfg.curve_points));
  for (int t = 0; t < cfg.curve_points; ++t)
    grid[static_cast<std::size_t>(t)] =
        static_cast<double>(t) / (cfg.curve_points - 1);
  const Eigen::MatrixXd psi_grid = eval_basis(spec.gef_basis, grid);

  struct RegionOut {
    std::vector<ReportRow> rows;
    std::vector<CurvePoint> curves;
    std::vector<std::string> warnings;
  };
  std::vector<RegionOut> outs(ds.regions.size());

  parallel_for(ds.regions.size(), cfg.threads, [&](std::size_t idx) {
    const RegionAssignment& ra = ds.regions[idx];
    auto& out = outs[idx];
    const std::string& name = ra.region.name;
    if (static_cast<int>(ra.columns.size()) < cfg.min_variants) {
      out.warnings.push_back(
          "region " + name + " matched " +
          std::to_string(ra.columns.size()) +
          " variants (< min_variants); skipped");
      return;
    }

    try {
      const std::vector<SubjectRecord> records = region_records(ds, idx);
      const DesignMatrix design = build_design(records, ra.region, spec);
      const LikelihoodData data = LikelihoodData::build(records, design);

      FitOptions null_options;
      null_options.opt = cfg.analysis.opt;
      null_options.restrict_gamma = true;
      const FitResult null_fit =
          fit_mle(spec, data, LikelihoodScope::Bivariate, null_options);
      if (!null_fit.converged)
        throw ConvergenceError("null fit did not converge");
      out.rows.push_back(make_row(name, "joint-score",
                                  score_test_at(null_fit)));

      FitOptions alt_options;
      alt_options.opt = cfg.analysis.opt;
      alt_options.init = null_fit.params;
      const FitResult alt_fit =
          fit_mle(spec, data, LikelihoodScope::Bivariate, alt_options);
      if (cfg.with_lrt)
        out.rows.push_back(
            make_row(name, "joint-lrt", lrt_pair(null_fit, alt_fit)));

      if (alt_fit.converged) {
        const Eigen::VectorXd curve = psi_grid * alt_fit.params.gamma;
        for (int t = 0; t < cfg.curve_points; ++t)
          out.curves.push_back(
              {name, grid[static_cast<std::size_t>(t)], curve[t]});
      }

      if (cfg.with_univariate) {
        FitOptions uni_options;
        uni_options.opt = cfg.analysis.opt;
        uni_options.restrict_gamma = true;
        const FitResult uni_fit =
            fit_mle(spec, data, LikelihoodScope::Margin1, uni_options);
        if (!uni_fit.converged)
          throw ConvergenceError("margin-1 null fit did not converge");
        out.rows.push_back(
            make_row(name, "margin1-score", score_test_at(uni_fit)));
      }
    } catch (const Error& e) {
      out.rows.push_back(failed_row(name, "joint-score", e.what()));
    }
  });

  for (auto& out : outs) {
    for (auto& row : out.rows) rep.rows.push_back(std::move(row));
    for (auto& pt : out.curves) rep.curves.push_back(std::move(pt));
    for (auto& w : out.warnings) rep.warnings.push_back(std::move(w));
  }
  return rep;
}

void RunReport::write(const std::string& prefix) const {
  {
    std::ofstream out(prefix + ".rows.tsv");
    if (!out) throw Error("cannot write " + prefix + ".rows.tsv");
    out << "dataset\tmethod\tdf\tstatistic\tp_value\tsingular\tok\tnote\t"
           "config_hash\tseed\n";
    for (const auto& r : rows)
      out << r.dataset << '\t' << r.method << '\t' << r.df << '\t'
          << fmt(r.statistic, "%.10g") << '\t' << fmt(r.p_value, "%.10g")
          << '\t' << (r.singular ? 1 : 0) << '\t' << (r.ok ? 1 : 0) << '\t'
          << (r.note.empty() ? "-" : sanitize(r.note)) << '\t' << config_hash
          << '\t' << seed << "\n";
  }
  {
    std::ofstream out(prefix + ".summary.tsv");
    if (!out) throw Error("cannot write " + prefix + ".summary.tsv");
    out << "method\talpha\tn_used\tn_failed\tn_reject\trate\tmc_se\t"
           "config_hash\tseed\n";
    for (const auto& s : summary)
      out << s.method << '\t' << fmt(s.alpha, "%.10g") << '\t' << s.n_used
          << '\t' << s.n_failed << '\t' << s.n_reject << '\t'
          << fmt(s.rate, "%.6f") << '\t' << fmt(s.mc_se, "%.6f") << '\t'
          << config_hash << '\t' << seed << "\n";
  }
  if (!curves.empty()) {
    std::ofstream out(prefix + ".curves.tsv");
    if (!out) throw Error("cannot write " + prefix + ".curves.tsv");
    out << "dataset\tu\tvalue\tconfig_hash\tseed\n";
    for (const auto& pt : curves)
      out << pt.dataset << '\t' << fmt(pt.u, "%.6f") << '\t'
          << fmt(pt.value, "%.10g") << '\t' << config_hash << '\t' << seed
          << "\n";
  }
  {
    std::ofstream out(prefix + ".config.txt");
    if (!out) throw Error("cannot write " + prefix + ".config.txt");
    out << "# command: " << command << "\n";
    out << "# config_hash: " << config_hash << "\n";
    out << config_text;
    for (const auto& w : warnings) out << "# warning: " << w << "\n";
  }
}

}  // namespace genecop
