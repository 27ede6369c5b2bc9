#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "genecop/harness.hpp"
#include "genecop/io.hpp"
#include "genecop/simulate.hpp"

using namespace genecop;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    const auto stamp =
        std::chrono::steady_clock::now().time_since_epoch().count();
    path = fs::temp_directory_path() /
           fs::path("genecop-harness-test-" + std::to_string(stamp));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int count_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  int n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

Type1Config tiny_type1() {
  Type1Config cfg;
  cfg.sim.seed = 321u;
  cfg.sim.n_subjects = 60;
  cfg.sim.n_variants = 12;
  cfg.sim.tau = 0.4;
  cfg.genotype_sets = 2;
  cfg.phenotype_sets = 3;
  cfg.analysis.n_basis = 3;
  cfg.analysis.bspline_order = 3;
  cfg.with_lrt = false;
  cfg.with_independence = false;
  cfg.with_univariate = false;
  cfg.alphas = {0.05};
  cfg.max_fail_frac = 0.5;  // tiny fits on 60 subjects may stumble
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("fnv-1a hashing matches the published test vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(fnv1a64("ab") != fnv1a64("ba"));
}

TEST_CASE("model options materialize a validated specification") {
  AnalysisOptions options;
  options.copula = CopulaKind::Gumbel;
  options.n_basis = 5;
  options.basis_family = BasisFamily::BSpline;
  const ModelSpec spec = make_model_spec(options);
  CHECK(spec.copula == CopulaKind::Gumbel);
  CHECK(spec.gef_basis.n_basis == 5);

  options.basis_family = BasisFamily::Fourier;
  options.n_basis = 4;  // invalid: fourier sizes must be odd
  CHECK_THROWS_AS(make_model_spec(options), DomainError);
}

TEST_CASE("null-calibration runs are deterministic and self-identifying") {
  const Type1Config cfg = tiny_type1();
  const RunReport a = cmd_type1(cfg);
  const RunReport b = cmd_type1(cfg);

  CHECK(a.command == "type1");
  CHECK(a.config_hash.size() == 16);
  CHECK(a.config_hash == b.config_hash);
  CHECK_FALSE(a.config_text.empty());

  REQUIRE(a.rows.size() == 6);  // 2 genotype sets x 3 replicates, one method
  REQUIRE(b.rows.size() == 6);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].dataset == b.rows[i].dataset);
    CHECK(a.rows[i].method == "joint-score");
    if (a.rows[i].ok) {
      CHECK(a.rows[i].p_value == b.rows[i].p_value);  // bit-identical
      CHECK(a.rows[i].p_value >= 0.0);
      CHECK(a.rows[i].p_value <= 1.0);
      CHECK(a.rows[i].df == 3);
    }
  }

  // Summary accounting: used plus failed covers every replicate.
  REQUIRE(!a.summary.empty());
  const SummaryRow& s = a.summary.front();
  CHECK(s.method == "joint-score");
  CHECK(s.alpha == 0.05);
  CHECK(s.n_used + s.n_failed == 6);
  CHECK(s.rate >= 0.0);
  CHECK(s.rate <= 1.0);
  if (s.n_used > 0) {
    const double expect_se =
        std::sqrt(s.rate * (1.0 - s.rate) / s.n_used);
    CHECK(s.mc_se == doctest::Approx(expect_se).epsilon(1e-12));
  }
}

TEST_CASE("a changed scenario changes the configuration hash") {
  Type1Config cfg = tiny_type1();
  const RunReport a = cmd_type1(cfg);
  cfg.sim.tau = 0.5;
  const RunReport b = cmd_type1(cfg);
  CHECK(a.config_hash != b.config_hash);
}

TEST_CASE("null-calibration scenarios must not request causal effects") {
  Type1Config cfg = tiny_type1();
  cfg.sim.causal_fraction = 0.1;
  cfg.sim.effect_c = 0.4;
  CHECK_THROWS_AS(cmd_type1(cfg), ConfigError);
}

TEST_CASE("power runs require effects and report the univariate comparator") {
  PowerConfig cfg;
  cfg.sim.seed = 654u;
  cfg.sim.n_subjects = 60;
  cfg.sim.n_variants = 12;
  cfg.sim.tau = 0.4;
  cfg.sim.causal_fraction = 0.2;
  cfg.sim.effect_c = 0.5;
  cfg.genotype_sets = 1;
  cfg.phenotype_sets = 3;
  cfg.analysis.n_basis = 3;
  cfg.analysis.bspline_order = 3;
  cfg.with_univariate = true;
  cfg.max_fail_frac = 0.7;

  const RunReport rep = cmd_power(cfg);
  CHECK(rep.command == "power");
  int joint = 0, uni = 0;
  for (const auto& row : rep.rows) {
    joint += row.method == "joint-score";
    uni += row.method == "margin1-score";
  }
  CHECK(joint == 3);
  CHECK(uni == 3);

  PowerConfig null_cfg = cfg;
  null_cfg.sim.causal_fraction = 0.0;
  null_cfg.sim.effect_c = 0.0;
  CHECK_THROWS_AS(cmd_power(null_cfg), ConfigError);
}

TEST_CASE("file-based analysis produces rows, curves, and report files") {
  SimConfig sim;
  sim.seed = 987u;
  sim.n_subjects = 80;
  sim.n_variants = 12;
  const SimulatedDataset ds = simulate_dataset(sim);

  TempDir dir;
  const std::string prefix = dir.file("data");
  write_dataset(prefix, ds.records, ds.genotypes.region);

  TestConfig cfg;
  cfg.pheno_path = prefix + ".pheno.tsv";
  cfg.geno_path = prefix + ".geno.tsv";
  cfg.regions_path = prefix + ".regions.tsv";
  cfg.min_variants = 5;
  cfg.analysis.n_basis = 3;
  cfg.analysis.bspline_order = 3;
  cfg.with_lrt = true;
  cfg.with_univariate = true;
  cfg.curve_points = 21;

  const RunReport rep = cmd_test(cfg);
  CHECK(rep.command == "test");

  std::vector<std::string> methods;
  for (const auto& row : rep.rows) {
    CHECK(row.ok);
    methods.push_back(row.method);
  }
  std::sort(methods.begin(), methods.end());
  CHECK(methods ==
        std::vector<std::string>{"joint-lrt", "joint-score", "margin1-score"});

  CHECK(rep.curves.size() == 21);
  CHECK(rep.curves.front().u == 0.0);
  CHECK(rep.curves.back().u == 1.0);

  const std::string out = dir.file("report");
  rep.write(out);
  CHECK(count_lines(out + ".rows.tsv") == 1 + 3);    // header + rows
  CHECK(count_lines(out + ".curves.tsv") == 1 + 21);
  CHECK(count_lines(out + ".config.txt") > 5);

  // Every row is stamped with the run's hash.
  std::ifstream rows_in(out + ".rows.tsv");
  std::string line;
  std::getline(rows_in, line);  // header
  while (std::getline(rows_in, line))
    CHECK(line.find(rep.config_hash) != std::string::npos);
}

TEST_CASE("regions under the variant threshold are skipped with a warning") {
  SimConfig sim;
  sim.seed = 988u;
  sim.n_subjects = 50;
  sim.n_variants = 8;
  const SimulatedDataset ds = simulate_dataset(sim);

  TempDir dir;
  const std::string prefix = dir.file("data");
  write_dataset(prefix, ds.records, ds.genotypes.region);

  TestConfig cfg;
  cfg.pheno_path = prefix + ".pheno.tsv";
  cfg.geno_path = prefix + ".geno.tsv";
  cfg.regions_path = prefix + ".regions.tsv";
  cfg.min_variants = 50;

  const RunReport rep = cmd_test(cfg);
  CHECK(rep.rows.empty());
  bool mentions_skip = false;
  for (const auto& w : rep.warnings)
    mentions_skip = mentions_skip || w.find("skip") != std::string::npos;
  CHECK(mentions_skip);
}

TEST_CASE("independence and univariate comparators appear on demand") {
  Type1Config cfg = tiny_type1();
  cfg.with_independence = true;
  cfg.with_univariate = true;
  cfg.with_lrt = true;
  const RunReport rep = cmd_type1(cfg);

  int score = 0, ratio = 0, indep = 0, uni = 0;
  for (const auto& row : rep.rows) {
    score += row.method == "joint-score";
    ratio += row.method == "joint-lrt";
    indep += row.method == "independence-score";
    uni += row.method == "margin1-score";
  }
  CHECK(score == 6);
  CHECK(ratio == 6);
  CHECK(indep == 6);
  CHECK(uni == 6);

  // Each method carries its own summary per alpha level.
  std::vector<std::string> summary_methods;
  for (const auto& s : rep.summary) summary_methods.push_back(s.method);
  std::sort(summary_methods.begin(), summary_methods.end());
  summary_methods.erase(
      std::unique(summary_methods.begin(), summary_methods.end()),
      summary_methods.end());
  CHECK(summary_methods ==
        std::vector<std::string>{"independence-score", "joint-lrt",
                                 "joint-score", "margin1-score"});
}

}  // TEST_SUITE
