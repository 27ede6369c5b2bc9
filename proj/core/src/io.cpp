#include "genecop/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace genecop {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(const std::string& token, const std::string& path,
                    std::size_t line, const char* what) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(path, line,
                     std::string("cannot parse ") + what + " '" + token + "'");
  return value;
}

bool parse_indicator(const std::string& token, const std::string& path,
                     std::size_t line, const char* what) {
  if (token == "0") return false;
  if (token == "1") return true;
  throw ParseError(path, line, std::string(what) + " must be 0 or 1, got '" +
                                   token + "'");
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

std::string format_exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

LoadedDataset load_dataset(const std::string& pheno_path,
                           const std::string& geno_path,
                           const std::string& regions_path, double flank) {
  if (!(std::isfinite(flank) && flank >= 0.0))
    throw DomainError("flank must be finite and >= 0");
  LoadedDataset out;

  // --- Phenotypes -------------------------------------------------------
  std::size_t n_covariates = 0;
  {
    std::ifstream in = open_or_throw(pheno_path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
      throw ParseError(pheno_path, 1, "missing header");
    ++lineno;
    const auto header = tokenize(line);
    if (header.size() < 5 || header[0] != "id" || header[1] != "y1" ||
        header[2] != "d1" || header[3] != "y2" || header[4] != "d2")
      throw ParseError(pheno_path, 1,
                       "header must start with 'id y1 d1 y2 d2'");
    n_covariates = header.size() - 5;

    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
      ++lineno;
      const auto tok = tokenize(line);
      if (tok.empty()) continue;
      if (tok.size() != header.size())
        throw ParseError(pheno_path, lineno,
                         "expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(tok.size()));
      SubjectRecord rec;
      rec.id = tok[0];
      if (!seen.insert(rec.id).second)
        throw ParseError(pheno_path, lineno, "duplicate subject id " + rec.id);
      rec.y1 = parse_double(tok[1], pheno_path, lineno, "y1");
      rec.d1 = parse_indicator(tok[2], pheno_path, lineno, "d1");
      rec.y2 = parse_double(tok[3], pheno_path, lineno, "y2");
      rec.d2 = parse_indicator(tok[4], pheno_path, lineno, "d2");
      for (std::size_t c = 0; c < n_covariates; ++c)
        rec.covariates.push_back(
            parse_double(tok[5 + c], pheno_path, lineno, "covariate"));
      if (!(rec.y1 >= 0.0) || !(rec.y2 >= 0.0))
        throw ParseError(pheno_path, lineno, "negative follow-up time");
      out.base_records.push_back(std::move(rec));
    }
  }
  if (out.base_records.empty())
    throw ParseError(pheno_path, 1, "no subjects");

  // --- Genotypes --------------------------------------------------------
  std::vector<std::string> geno_ids;
  std::vector<std::vector<double>> geno_rows;
  {
    std::ifstream in = open_or_throw(geno_path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
      throw ParseError(geno_path, 1, "missing header");
    ++lineno;
    const auto header = tokenize(line);
    if (header.size() < 2 || header[0] != "id")
      throw ParseError(geno_path, 1,
                       "header must be 'id' followed by variant columns");
    for (std::size_t c = 1; c < header.size(); ++c) {
      const std::string& h = header[c];
      const std::size_t p1 = h.find(':');
      const std::size_t p2 = p1 == std::string::npos
                                 ? std::string::npos
                                 : h.find(':', p1 + 1);
      if (p1 == std::string::npos || p2 == std::string::npos)
        throw ParseError(geno_path, 1,
                         "variant column '" + h + "' is not chr:pos:id");
      VariantColumn col;
      col.chr = h.substr(0, p1);
      col.pos = parse_double(h.substr(p1 + 1, p2 - p1 - 1), geno_path, 1,
                             "variant position");
      col.id = h.substr(p2 + 1);
      if (col.chr.empty() || col.id.empty())
        throw ParseError(geno_path, 1,
                         "variant column '" + h + "' is not chr:pos:id");
      out.variants.push_back(std::move(col));
    }

    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
      ++lineno;
      const auto tok = tokenize(line);
      if (tok.empty()) continue;
      if (tok.size() != header.size())
        throw ParseError(geno_path, lineno,
                         "expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(tok.size()));
      if (!seen.insert(tok[0]).second)
        throw ParseError(geno_path, lineno, "duplicate subject id " + tok[0]);
      geno_ids.push_back(tok[0]);
      std::vector<double> row;
      row.reserve(out.variants.size());
      for (std::size_t c = 1; c < tok.size(); ++c) {
        if (tok[c] == "NA") {
          row.push_back(kMissingGenotype);
          continue;
        }
        const double g = parse_double(tok[c], geno_path, lineno, "dosage");
        if (g != 0.0 && g != 1.0 && g != 2.0)
          throw ParseError(geno_path, lineno,
                           "dosage must be 0, 1, 2 or NA, got '" + tok[c] +
                               "'");
        row.push_back(g);
      }
      geno_rows.push_back(std::move(row));
    }
  }

  // --- Join on subject id ----------------------------------------------
  {
    std::unordered_map<std::string, std::size_t> geno_index;
    for (std::size_t r = 0; r < geno_ids.size(); ++r)
      geno_index.emplace(geno_ids[r], r);

    auto list_ids = [](const std::vector<std::string>& ids) {
      std::string s;
      for (std::size_t i = 0; i < ids.size() && i < 8; ++i) {
        if (i) s += ", ";
        s += ids[i];
      }
      if (ids.size() > 8)
        s += ", ... (" + std::to_string(ids.size()) + " total)";
      return s;
    };

    std::vector<std::string> missing;
    for (const auto& rec : out.base_records)
      if (!geno_index.count(rec.id)) missing.push_back(rec.id);
    if (!missing.empty())
      throw JoinError("subjects missing from the genotype table: " +
                      list_ids(missing));
    if (geno_ids.size() != out.base_records.size()) {
      std::unordered_set<std::string> pheno_ids;
      for (const auto& rec : out.base_records) pheno_ids.insert(rec.id);
      std::vector<std::string> extra;
      for (const auto& id : geno_ids)
        if (!pheno_ids.count(id)) extra.push_back(id);
      throw JoinError("subjects missing from the phenotype table: " +
                      list_ids(extra));
    }

    const auto n = static_cast<Eigen::Index>(out.base_records.size());
    const auto m = static_cast<Eigen::Index>(out.variants.size());
    out.dosages.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row =
          geno_rows[geno_index.at(out.base_records[static_cast<std::size_t>(i)]
                                      .id)];
      for (Eigen::Index j = 0; j < m; ++j)
        out.dosages(i, j) = row[static_cast<std::size_t>(j)];
    }
  }

  // --- Regions ----------------------------------------------------------
  {
    std::ifstream in = open_or_throw(regions_path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
      throw ParseError(regions_path, 1, "missing header");
    ++lineno;
    const auto header = tokenize(line);
    if (header.size() != 4 || header[0] != "name" || header[1] != "chr" ||
        header[2] != "start" || header[3] != "end")
      throw ParseError(regions_path, 1, "header must be 'name chr start end'");

    while (std::getline(in, line)) {
      ++lineno;
      const auto tok = tokenize(line);
      if (tok.empty()) continue;
      if (tok.size() != 4)
        throw ParseError(regions_path, lineno, "expected 4 fields");
      RegionAssignment ra;
      ra.region.name = tok[0];
      ra.chr = tok[1];
      ra.start = parse_double(tok[2], regions_path, lineno, "start");
      ra.end = parse_double(tok[3], regions_path, lineno, "end");
      if (ra.end < ra.start)
        throw ParseError(regions_path, lineno, "end before start");

      std::vector<int> cols;
      for (std::size_t c = 0; c < out.variants.size(); ++c) {
        const auto& var = out.variants[c];
        if (var.chr != ra.chr) continue;
        if (var.pos < ra.start - flank || var.pos > ra.end + flank) continue;
        cols.push_back(static_cast<int>(c));
      }
      std::sort(cols.begin(), cols.end(), [&](int a, int b) {
        return out.variants[static_cast<std::size_t>(a)].pos <
               out.variants[static_cast<std::size_t>(b)].pos;
      });
      for (std::size_t c = 1; c < cols.size(); ++c) {
        const double prev =
            out.variants[static_cast<std::size_t>(cols[c - 1])].pos;
        const double cur = out.variants[static_cast<std::size_t>(cols[c])].pos;
        if (prev == cur)
          throw InvalidRegionError(
              "region " + ra.region.name + ": duplicate variant position " +
              format_exact(cur) + " (" +
              out.variants[static_cast<std::size_t>(cols[c - 1])].id + ", " +
              out.variants[static_cast<std::size_t>(cols[c])].id + ")");
      }
      if (cols.size() < 2) {
        out.warnings.push_back("region " + ra.region.name + " matched " +
                               std::to_string(cols.size()) +
                               " variant(s); skipped");
        continue;
      }

      for (int c : cols) {
        const auto& var = out.variants[static_cast<std::size_t>(c)];
        ra.region.positions.push_back(var.pos);
        ra.region.variant_ids.push_back(var.id);
        double sum = 0.0;
        Eigen::Index cnt = 0;
        for (Eigen::Index i = 0; i < out.dosages.rows(); ++i) {
          const double g = out.dosages(i, c);
          if (is_missing(g)) continue;
          sum += g;
          ++cnt;
        }
        const double p =
            cnt > 0 ? sum / (2.0 * static_cast<double>(cnt)) : 0.0;
        ra.maf.push_back(std::min(p, 1.0 - p));
      }
      ra.columns = std::move(cols);
      validate_region(ra.region);
      out.regions.push_back(std::move(ra));
    }
  }
  return out;
}

std::vector<SubjectRecord> region_records(const LoadedDataset& dataset,
                                          std::size_t region_index) {
  if (region_index >= dataset.regions.size())
    throw DomainError("region index out of range");
  const RegionAssignment& ra = dataset.regions[region_index];
  std::vector<SubjectRecord> records = dataset.base_records;
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].genotypes.resize(ra.columns.size());
    for (std::size_t j = 0; j < ra.columns.size(); ++j)
      records[i].genotypes[j] =
          dataset.dosages(static_cast<Eigen::Index>(i), ra.columns[j]);
  }
  return records;
}

void write_dataset(const std::string& prefix,
                   const std::vector<SubjectRecord>& records,
                   const GeneRegion& region) {
  validate_region(region);
  if (records.empty()) throw DomainError("write_dataset: no records");
  const std::size_t p = records.front().covariates.size();
  const std::size_t m = region.positions.size();

  {
    std::ofstream out(prefix + ".pheno.tsv");
    if (!out) throw Error("cannot write " + prefix + ".pheno.tsv");
    out << "id\ty1\td1\ty2\td2";
    for (std::size_t c = 0; c < p; ++c) out << "\tx" << (c + 1);
    out << "\n";
    for (const auto& rec : records) {
      out << rec.id << '\t' << format_exact(rec.y1) << '\t' << (rec.d1 ? 1 : 0)
          << '\t' << format_exact(rec.y2) << '\t' << (rec.d2 ? 1 : 0);
      for (double x : rec.covariates) out << '\t' << format_exact(x);
      out << "\n";
    }
  }

  {
    std::ofstream out(prefix + ".geno.tsv");
    if (!out) throw Error("cannot write " + prefix + ".geno.tsv");
    out << "id";
    for (std::size_t j = 0; j < m; ++j)
      out << "\t1:" << format_exact(region.positions[j]) << ':'
          << region.variant_ids[j];
    out << "\n";
    for (const auto& rec : records) {
      if (rec.genotypes.size() != m)
        throw DomainError("write_dataset: record " + rec.id +
                          " does not match the region size");
      out << rec.id;
      for (double g : rec.genotypes) {
        if (is_missing(g))
          out << "\tNA";
        else
          out << '\t' << static_cast<int>(g);
      }
      out << "\n";
    }
  }

  {
    std::ofstream out(prefix + ".regions.tsv");
    if (!out) throw Error("cannot write " + prefix + ".regions.tsv");
    out << "name\tchr\tstart\tend\n";
    out << region.name << "\t1\t" << format_exact(region.positions.front())
        << '\t' << format_exact(region.positions.back()) << "\n";
  }
}

}  // namespace genecop
