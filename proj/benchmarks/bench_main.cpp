// Microbenchmarks for the hot paths: basis evaluation, design assembly,
// copula kernels, the censored joint log-likelihood, and a full null fit.
//
// Run with --benchmark_filter=<regex> to restrict; the fit benchmark is the
// slow one (hundreds of milliseconds per iteration).

#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "genecop/basis.hpp"
#include "genecop/copula.hpp"
#include "genecop/inference.hpp"
#include "genecop/likelihood.hpp"
#include "genecop/simulate.hpp"

namespace {

using namespace genecop;

SimConfig bench_sim(int n_subjects, int n_variants) {
  SimConfig cfg;
  cfg.seed = 20260816;
  cfg.n_subjects = n_subjects;
  cfg.n_variants = n_variants;
  cfg.tau = 0.4;
  return cfg;
}

struct BenchData {
  SimulatedDataset dataset;
  ModelSpec spec;
  LikelihoodData data;
  ParameterVector params;
};

const BenchData& bench_data(int n_subjects, int n_variants) {
  static std::map<std::pair<int, int>, BenchData> cache;
  const auto key = std::make_pair(n_subjects, n_variants);
  auto it = cache.find(key);
  if (it == cache.end()) {
    BenchData bd;
    bd.dataset = simulate_dataset(bench_sim(n_subjects, n_variants));
    bd.spec.copula = CopulaKind::Clayton;
    bd.spec.gef_basis = BasisSpec::bspline(5, 4);
    const DesignMatrix design = build_design(
        bd.dataset.records, bd.dataset.genotypes.region, bd.spec);
    bd.data = LikelihoodData::build(bd.dataset.records, design);
    NaturalParams nat;
    nat.lambda1 = nat.lambda2 = 0.1;
    nat.k1 = nat.k2 = 2.0;
    nat.beta = Eigen::VectorXd::Zero(1);
    nat.eta = tau_to_eta(CopulaKind::Clayton, 0.4);
    nat.gamma = Eigen::VectorXd::Zero(5);
    bd.params = to_unconstrained(nat, bd.spec.copula);
    it = cache.emplace(key, std::move(bd)).first;
  }
  return it->second;
}

void BM_BasisEval(benchmark::State& state) {
  const BasisSpec spec = BasisSpec::bspline(5, 4);
  std::vector<double> grid(200);
  for (int i = 0; i < 200; ++i) grid[i] = i / 199.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(eval_basis(spec, grid));
}
BENCHMARK(BM_BasisEval);

void BM_DesignBuild(benchmark::State& state) {
  const auto& bd = bench_data(500, 100);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_design(
        bd.dataset.records, bd.dataset.genotypes.region, bd.spec));
}
BENCHMARK(BM_DesignBuild);

void BM_CopulaLogDensity(benchmark::State& state) {
  const CopulaFamily fam = CopulaFamily::clayton(2.0);
  double lu = std::log(0.3), lv = std::log(0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_density_from_logs(fam, lu, lv));
    lu = lu < -2.0 ? -0.1 : lu - 1e-6;  // keep inputs moving
  }
}
BENCHMARK(BM_CopulaLogDensity);

void BM_GumbelInverse(benchmark::State& state) {
  const CopulaFamily fam = CopulaFamily::gumbel(2.5);
  double w = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_inverse(fam, w, 0.4));
    w = w > 0.9 ? 0.1 : w + 1e-4;
  }
}
BENCHMARK(BM_GumbelInverse);

void BM_JointLoglik500(benchmark::State& state) {
  const auto& bd = bench_data(500, 100);
  for (auto _ : state)
    benchmark::DoNotOptimize(loglik(bd.spec, bd.params, bd.data));
}
BENCHMARK(BM_JointLoglik500);

void BM_NullFit150(benchmark::State& state) {
  const auto& bd = bench_data(150, 16);
  for (auto _ : state) {
    FitOptions options;
    options.restrict_gamma = true;
    benchmark::DoNotOptimize(
        fit_mle(bd.spec, bd.data, LikelihoodScope::Bivariate, options));
  }
}
BENCHMARK(BM_NullFit150);

}  // namespace

BENCHMARK_MAIN();
