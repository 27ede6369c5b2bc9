#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "genecop/simulate.hpp"
#include "genecop/types.hpp"

namespace genecop {

/// One genotype-table column: chromosome, physical position, variant id
/// (parsed from a `chr:pos:id` column header).
struct VariantColumn {
  std::string chr;
  double pos = 0.0;
  std::string id;
};

/// A gene region matched against the genotype table: the region itself (in
/// position order) plus the dosage-column index and folded allele frequency
/// of each matched variant.
struct RegionAssignment {
  GeneRegion region;
  std::string chr;
  double start = 0.0, end = 0.0;
  std::vector<int> columns;
  std::vector<double> maf;
};

/// A joined dataset: phenotype records (without genotype slices), the full
/// dosage matrix in record order, and per-region variant assignments.
struct LoadedDataset {
  std::vector<SubjectRecord> base_records;
  std::vector<VariantColumn> variants;
  Eigen::MatrixXd dosages;  // n x total variants, NaN = missing call
  std::vector<RegionAssignment> regions;
  std::vector<std::string> warnings;
};

/// Loads and joins the three input files.
///
/// Phenotype: header `id y1 d1 y2 d2 [x1 ...]`, one subject per line.
/// Genotype: header `id` followed by `chr:pos:variant_id` columns; cells in
/// {0,1,2,NA}.  Regions: header `name chr start end`.  Variants join a
/// region when they share its chromosome and lie within `flank` of
/// [start, end].  Malformed content throws ParseError (with file and line);
/// subject-id mismatches throw JoinError naming the offending ids; duplicate
/// variant positions inside a matched region throw InvalidRegionError.
/// Regions matching fewer than two variants are skipped with a warning.
LoadedDataset load_dataset(const std::string& pheno_path,
                           const std::string& geno_path,
                           const std::string& regions_path,
                           double flank = 5000.0);

/// Materializes the records of one region: base records plus that region's
/// genotype slice, ready for build_design.
std::vector<SubjectRecord> region_records(const LoadedDataset& dataset,
                                          std::size_t region_index);

/// Writes a simulated dataset as the three-file format load_dataset reads:
/// <prefix>.pheno.tsv, <prefix>.geno.tsv, <prefix>.regions.tsv.  All
/// numbers round-trip exactly.
void write_dataset(const std::string& prefix,
                   const std::vector<SubjectRecord>& records,
                   const GeneRegion& region);

}  // namespace genecop
