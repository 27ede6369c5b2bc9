#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

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
           fs::path("genecop-io-test-" + std::to_string(stamp) + "-" +
                    std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

// A complete, well-formed trio of input files: 4 subjects, 3 variants in
// one region plus 1 variant on another chromosome.
struct SmallFiles {
  TempDir dir;
  std::string pheno, geno, regions;
  SmallFiles() {
    pheno = dir.file("p.tsv");
    geno = dir.file("g.tsv");
    regions = dir.file("r.tsv");
    write_text(pheno,
               "id\ty1\td1\ty2\td2\tx1\n"
               "s1\t1.5\t1\t2.25\t0\t0.5\n"
               "s2\t0.75\t0\t1.0\t1\t-1.25\n"
               "s3\t3.5\t1\t0.5\t1\t2.0\n"
               "s4\t2.0\t0\t4.5\t0\t0.0\n");
    write_text(geno,
               "id\t1:100:v1\t1:250:v2\t1:400:v3\t2:100:w1\n"
               "s1\t0\t1\t2\t0\n"
               "s2\t1\tNA\t0\t1\n"
               "s3\t0\t0\t1\t2\n"
               "s4\t2\t1\t0\t0\n");
    write_text(regions,
               "name\tchr\tstart\tend\n"
               "geneA\t1\t90\t410\n"
               "geneB\t2\t50\t150\n");
  }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("a well-formed trio loads, joins, and assigns regions") {
  SmallFiles f;
  const LoadedDataset ds = load_dataset(f.pheno, f.geno, f.regions, 0.0);

  REQUIRE(ds.base_records.size() == 4);
  CHECK(ds.base_records[0].id == "s1");
  CHECK(ds.base_records[1].y1 == 0.75);
  CHECK(ds.base_records[1].d1 == false);
  CHECK(ds.base_records[2].covariates[0] == 2.0);

  REQUIRE(ds.variants.size() == 4);
  CHECK(ds.variants[0].chr == "1");
  CHECK(ds.variants[0].pos == 100.0);
  CHECK(ds.variants[3].id == "w1");

  CHECK(std::isnan(ds.dosages(1, 1)));  // the NA cell
  CHECK(ds.dosages(0, 2) == 2.0);

  // geneA matches the three chr-1 variants; geneB has only one variant and
  // is skipped with a warning.
  REQUIRE(ds.regions.size() == 1);
  CHECK(ds.regions[0].region.name == "geneA");
  CHECK(ds.regions[0].columns == std::vector<int>{0, 1, 2});
  REQUIRE_FALSE(ds.warnings.empty());

  const auto recs = region_records(ds, 0);
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].genotypes == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(std::isnan(recs[1].genotypes[1]));

  // Folded frequency of v3: dosage sum 3 over 8 alleles.
  CHECK(ds.regions[0].maf[2] == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("flanking windows pull nearby variants into a region") {
  SmallFiles f;
  // With flank 0 geneB keeps only w1 (pos 100); widening the window to 5000
  // cannot help geneB (chromosome 2 has one variant), but shrinking geneA's
  // nominal span while flanking restores all three variants.
  write_text(f.regions,
             "name\tchr\tstart\tend\n"
             "geneA\t1\t240\t260\n");
  const LoadedDataset narrow = load_dataset(f.pheno, f.geno, f.regions, 0.0);
  REQUIRE(narrow.regions.size() == 0);  // one variant only: skipped

  const LoadedDataset wide = load_dataset(f.pheno, f.geno, f.regions, 150.0);
  REQUIRE(wide.regions.size() == 1);
  CHECK(wide.regions[0].columns == std::vector<int>{0, 1, 2});

  // Boundaries are inclusive: flank 140 puts the window at exactly
  // [100, 400], landing on both outer variants.
  const LoadedDataset edge = load_dataset(f.pheno, f.geno, f.regions, 140.0);
  REQUIRE(edge.regions.size() == 1);
  CHECK(edge.regions[0].columns == std::vector<int>{0, 1, 2});

  // One base narrower drops both and the region is skipped.
  const LoadedDataset inside = load_dataset(f.pheno, f.geno, f.regions, 139.0);
  CHECK(inside.regions.empty());
}

TEST_CASE("subject tables must agree in both directions") {
  SmallFiles f;
  SUBCASE("phenotype subject missing from the genotype table") {
    write_text(f.geno,
               "id\t1:100:v1\t1:250:v2\n"
               "s1\t0\t1\n"
               "s2\t1\t0\n"
               "s3\t0\t0\n");
    CHECK_THROWS_WITH_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                         doctest::Contains("s4"), JoinError);
  }
  SUBCASE("genotype subject missing from the phenotype table") {
    write_text(f.pheno,
               "id\ty1\td1\ty2\td2\tx1\n"
               "s1\t1.5\t1\t2.25\t0\t0.5\n"
               "s2\t0.75\t0\t1.0\t1\t-1.25\n"
               "s3\t3.5\t1\t0.5\t1\t2.0\n");
    CHECK_THROWS_WITH_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                         doctest::Contains("s4"), JoinError);
  }
}

TEST_CASE("genotype rows may arrive in any order") {
  SmallFiles f;
  write_text(f.geno,
             "id\t1:100:v1\t1:250:v2\t1:400:v3\t2:100:w1\n"
             "s4\t2\t1\t0\t0\n"
             "s2\t1\tNA\t0\t1\n"
             "s1\t0\t1\t2\t0\n"
             "s3\t0\t0\t1\t2\n");
  const LoadedDataset ds = load_dataset(f.pheno, f.geno, f.regions, 0.0);
  // Rows are aligned to phenotype order: s1's dosages come first.
  CHECK(ds.dosages(0, 0) == 0.0);
  CHECK(ds.dosages(0, 2) == 2.0);
  CHECK(ds.dosages(3, 0) == 2.0);
  CHECK(std::isnan(ds.dosages(1, 1)));
}

TEST_CASE("malformed content is reported with file and line") {
  SmallFiles f;

  SUBCASE("fractional dosage") {
    write_text(f.geno,
               "id\t1:100:v1\t1:250:v2\t1:400:v3\t2:100:w1\n"
               "s1\t0\t1\t2\t0\n"
               "s2\t1\t0.5\t0\t1\n"
               "s3\t0\t0\t1\t2\n"
               "s4\t2\t1\t0\t0\n");
    try {
      (void)load_dataset(f.pheno, f.geno, f.regions, 0.0);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.path() == f.geno);
    }
  }
  SUBCASE("event indicator outside {0,1}") {
    write_text(f.pheno,
               "id\ty1\td1\ty2\td2\tx1\n"
               "s1\t1.5\t1\t2.25\t0\t0.5\n"
               "s2\t0.75\t2\t1.0\t1\t-1.25\n"
               "s3\t3.5\t1\t0.5\t1\t2.0\n"
               "s4\t2.0\t0\t4.5\t0\t0.0\n");
    CHECK_THROWS_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                    ParseError);
  }
  SUBCASE("unparseable number") {
    write_text(f.pheno,
               "id\ty1\td1\ty2\td2\tx1\n"
               "s1\tabc\t1\t2.25\t0\t0.5\n"
               "s2\t0.75\t0\t1.0\t1\t-1.25\n"
               "s3\t3.5\t1\t0.5\t1\t2.0\n"
               "s4\t2.0\t0\t4.5\t0\t0.0\n");
    CHECK_THROWS_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                    ParseError);
  }
  SUBCASE("missing column") {
    write_text(f.pheno,
               "id\ty1\td1\ty2\td2\tx1\n"
               "s1\t1.5\t1\t2.25\t0\n"
               "s2\t0.75\t0\t1.0\t1\t-1.25\n"
               "s3\t3.5\t1\t0.5\t1\t2.0\n"
               "s4\t2.0\t0\t4.5\t0\t0.0\n");
    CHECK_THROWS_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                    ParseError);
  }
  SUBCASE("duplicate subject id") {
    write_text(f.pheno,
               "id\ty1\td1\ty2\td2\tx1\n"
               "s1\t1.5\t1\t2.25\t0\t0.5\n"
               "s1\t0.75\t0\t1.0\t1\t-1.25\n"
               "s3\t3.5\t1\t0.5\t1\t2.0\n"
               "s4\t2.0\t0\t4.5\t0\t0.0\n");
    CHECK_THROWS_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                    ParseError);
  }
  SUBCASE("malformed variant header") {
    write_text(f.geno,
               "id\t1:100:v1\tnonsense\t1:400:v3\t2:100:w1\n"
               "s1\t0\t1\t2\t0\n"
               "s2\t1\t0\t0\t1\n"
               "s3\t0\t0\t1\t2\n"
               "s4\t2\t1\t0\t0\n");
    CHECK_THROWS_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                    ParseError);
  }
  SUBCASE("bad region window") {
    write_text(f.regions,
               "name\tchr\tstart\tend\n"
               "geneA\t1\t410\t90\n");
    CHECK_THROWS_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                    ParseError);
  }
}

TEST_CASE("duplicate variant positions inside a region are rejected") {
  SmallFiles f;
  write_text(f.geno,
             "id\t1:100:v1\t1:100:v1b\t1:400:v3\t2:100:w1\n"
             "s1\t0\t1\t2\t0\n"
             "s2\t1\t0\t0\t1\n"
             "s3\t0\t0\t1\t2\n"
             "s4\t2\t1\t0\t0\n");
  CHECK_THROWS_AS(load_dataset(f.pheno, f.geno, f.regions, 0.0),
                  InvalidRegionError);
}

TEST_CASE("simulated datasets survive a write/load round trip exactly") {
  SimConfig cfg;
  cfg.seed = 31415u;
  cfg.n_subjects = 30;
  cfg.n_variants = 12;
  SimulatedDataset sim = simulate_dataset(cfg);
  // Inject a missing call to confirm NA round-trips.
  sim.records[3].genotypes[2] = kMissingGenotype;

  TempDir dir;
  const std::string prefix = dir.file("ds");
  write_dataset(prefix, sim.records, sim.genotypes.region);

  const LoadedDataset ds =
      load_dataset(prefix + ".pheno.tsv", prefix + ".geno.tsv",
                   prefix + ".regions.tsv", 0.0);
  REQUIRE(ds.base_records.size() == sim.records.size());
  REQUIRE(ds.regions.size() == 1);
  REQUIRE(ds.regions[0].columns.size() == 12);

  const auto recs = region_records(ds, 0);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& a = sim.records[i];
    const auto& b = recs[i];
    CHECK(a.id == b.id);
    CHECK(a.y1 == b.y1);  // exact: %.17g round trip
    CHECK(a.y2 == b.y2);
    CHECK(a.d1 == b.d1);
    CHECK(a.d2 == b.d2);
    REQUIRE(a.covariates.size() == b.covariates.size());
    for (std::size_t c = 0; c < a.covariates.size(); ++c)
      CHECK(a.covariates[c] == b.covariates[c]);
    REQUIRE(a.genotypes.size() == b.genotypes.size());
    for (std::size_t j = 0; j < a.genotypes.size(); ++j) {
      if (std::isnan(a.genotypes[j]))
        CHECK(std::isnan(b.genotypes[j]));
      else
        CHECK(a.genotypes[j] == b.genotypes[j]);
    }
  }
  // Region coordinates survive exactly as well.
  for (std::size_t j = 0; j < 12; ++j)
    CHECK(ds.regions[0].region.positions[j] ==
          sim.genotypes.region.positions[j]);
}

}  // TEST_SUITE
