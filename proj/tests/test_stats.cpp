#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "genecop/errors.hpp"
#include "genecop/rng.hpp"
#include "genecop/stats.hpp"

using namespace genecop;

namespace {

// Quadratic-time tau-b used as an independent comparator for the
// merge-sort implementation.
double kendall_tau_bruteforce(const std::vector<double>& x,
                              const std::vector<double>& y) {
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  const double total = 0.5 * static_cast<double>(n) * (n - 1);
  const double denom = std::sqrt((total - ties_x) * (total - ties_y));
  return (concordant - discordant) / denom;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("chi-square survival function matches multiprecision references") {
  struct Row {
    double x;
    int df;
    double sf;
  };
  // Reference values computed with a 50-digit regularized incomplete gamma.
  const Row rows[] = {
      {1.0, 1, 0.317310507862914093},
      {5.0, 2, 0.0820849986238988},
      {10.5, 5, 0.06224592809090599},
      {80.0, 1, 3.7440973842028989e-19},
      {0.5, 3, 0.918891411654675805},
      {25.0, 10, 0.00534550548713406438},
  };
  for (const auto& r : rows)
    CHECK(chisq_sf(r.x, r.df) == doctest::Approx(r.sf).epsilon(1e-12));
}

TEST_CASE("chi-square upper quantiles at the 5% level") {
  // 0.95 quantiles for df=1 and df=5 (the default tested-block size).
  CHECK(chisq_sf(3.841458820694126, 1) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(chisq_sf(11.070497693516353, 5) ==
        doctest::Approx(0.05).epsilon(1e-12));
  CHECK(chisq_sf(2.705543454095404, 1) == doctest::Approx(0.10).epsilon(1e-12));
}

TEST_CASE("chi-square survival function endpoints and monotonicity") {
  CHECK(chisq_sf(0.0, 1) == 1.0);
  CHECK(chisq_sf(0.0, 7) == 1.0);
  for (int df : {1, 3, 8}) {
    double prev = 1.0;
    for (double x = 0.25; x < 40.0; x += 0.25) {
      const double s = chisq_sf(x, df);
      CHECK(s <= prev);
      CHECK(s >= 0.0);
      prev = s;
    }
  }
  CHECK_THROWS_AS(chisq_sf(-1.0, 1), DomainError);
  CHECK_THROWS_AS(chisq_sf(1.0, 0), DomainError);
}

TEST_CASE("normal quantile matches references and inverts the cdf") {
  CHECK(norm_quantile(0.975) ==
        doctest::Approx(1.95996398454005427).epsilon(1e-14));
  CHECK(norm_quantile(0.95) ==
        doctest::Approx(1.64485362695147264).epsilon(1e-14));
  CHECK(norm_quantile(1e-8) ==
        doctest::Approx(-5.61200124417478907).epsilon(1e-13));
  CHECK(norm_quantile(0.3) ==
        doctest::Approx(-0.524400512708040778).epsilon(1e-14));
  CHECK(norm_quantile(0.5) == doctest::Approx(0.0));

  CHECK(norm_cdf(1.0) == doctest::Approx(0.841344746068542926).epsilon(1e-14));
  CHECK(norm_cdf(-2.5) ==
        doctest::Approx(0.00620966532577613486).epsilon(1e-13));

  for (double p : {1e-10, 1e-4, 0.2, 0.5, 0.77, 1.0 - 1e-6}) {
    const double x = norm_quantile(p);
    CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-11));
  }
  CHECK_THROWS_AS(norm_quantile(0.0), DomainError);
  CHECK_THROWS_AS(norm_quantile(1.0), DomainError);
}

TEST_CASE("kendall tau handles exact concordance and hand-checked ties") {
  CHECK(kendall_tau({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(kendall_tau({1, 2, 3, 4}, {40, 30, 20, 10}) == doctest::Approx(-1.0));
  // x = (1,2,2,3), y = (1,3,2,4): 5 concordant pairs, 1 x-tie, tau-b =
  // 5 / sqrt(5 * 6).
  CHECK(kendall_tau({1, 2, 2, 3}, {1, 3, 2, 4}) ==
        doctest::Approx(5.0 / std::sqrt(30.0)).epsilon(1e-14));
  CHECK_THROWS_AS(kendall_tau({1, 2}, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(kendall_tau({1}, {1}), DomainError);
  CHECK_THROWS_AS(kendall_tau({2, 2, 2}, {1, 2, 3}), DomainError);
}

TEST_CASE("kendall tau agrees with the quadratic-time comparator") {
  Rng rng(20240816u);
  for (int rep = 0; rep < 4; ++rep) {
    const std::size_t n = 180;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = 0.4 * x[i] + rng.normal();
    }
    CHECK(kendall_tau(x, y) ==
          doctest::Approx(kendall_tau_bruteforce(x, y)).epsilon(1e-12));
    // Repeat with heavy ties.
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::floor(3.0 * x[i]);
      y[i] = std::floor(3.0 * y[i]);
    }
    if (x.front() == x.back()) x.back() += 1.0;  // keep non-constant
    CHECK(kendall_tau(x, y) ==
          doctest::Approx(kendall_tau_bruteforce(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("kolmogorov-smirnov distance on a hand-evaluated sample") {
  const std::vector<double> sample = {0.5, 0.1, 0.9};  // unsorted on purpose
  const double d = ks_distance(sample, [](double t) { return t; });
  CHECK(d == doctest::Approx(7.0 / 30.0).epsilon(1e-14));
}

TEST_CASE("kolmogorov-smirnov p-value matches the series at lambda = 1") {
  // With n = 100 the continuity-corrected scale factor is exactly 10.131,
  // so d = 1/10.131 makes the series argument lambda = 1, where the
  // two-sided tail equals 0.269999671677354502.
  const double d = 1.0 / 10.131;
  CHECK(ks_pvalue(d, 100) ==
        doctest::Approx(0.269999671677354502).epsilon(1e-12));
  CHECK(ks_pvalue(0.0, 50) == 1.0);
  CHECK(ks_pvalue(0.9, 1000) <= 1e-12);
}

TEST_CASE("uniform samples pass, shifted samples fail the ks test") {
  Rng rng(7u);
  std::vector<double> u(2000);
  for (auto& v : u) v = rng.uniform01();
  const auto unif_cdf = [](double t) {
    return t < 0 ? 0.0 : (t > 1 ? 1.0 : t);
  };
  const double d_good = ks_distance(u, unif_cdf);
  CHECK(ks_pvalue(d_good, u.size()) > 0.01);

  for (auto& v : u) v = std::pow(v, 1.35);  // clearly non-uniform
  const double d_bad = ks_distance(u, unif_cdf);
  CHECK(ks_pvalue(d_bad, u.size()) < 1e-6);
}

TEST_CASE("gauss-legendre rules integrate high-degree polynomials exactly") {
  const GaussLegendre& gl = gauss_legendre(64);
  REQUIRE(gl.nodes.size() == 64);
  double wsum = 0.0;
  for (double w : gl.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  double quad = 0.0, deg126 = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    quad += gl.weights[i] * gl.nodes[i] * gl.nodes[i];
    deg126 += gl.weights[i] * std::pow(gl.nodes[i], 126);
  }
  CHECK(quad == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  // Degree 126 is within the rule's exactness degree 2*64 - 1 = 127.
  CHECK(deg126 == doctest::Approx(2.0 / 127.0).epsilon(1e-11));

  // Nodes are increasing and symmetric about zero.
  for (std::size_t i = 1; i < gl.nodes.size(); ++i)
    CHECK(gl.nodes[i] > gl.nodes[i - 1]);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i)
    CHECK(gl.nodes[i] ==
          doctest::Approx(-gl.nodes[gl.nodes.size() - 1 - i]).epsilon(1e-14));

  // Results are cached: the same reference comes back.
  CHECK(&gauss_legendre(64) == &gl);
}

TEST_CASE("random generator produces calibrated uniform and normal draws") {
  Rng a(42u), b(42u), c(43u);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
  bool differs = false;
  Rng a2(42u);
  for (int i = 0; i < 16; ++i) differs = differs || a2.next_u64() != c.next_u64();
  CHECK(differs);

  Rng r(123u);
  double sum = 0.0, sum2 = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(sum2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.02));

  double nsum = 0.0, nsum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    nsum += z;
    nsum2 += z * z;
  }
  CHECK(nsum / n == doctest::Approx(0.0).epsilon(0.03));
  CHECK(nsum2 / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("substreams are reproducible and decorrelated from their parents") {
  Rng s1 = Rng::stream(99u, {1, 7});
  Rng s2 = Rng::stream(99u, {1, 7});
  Rng s3 = Rng::stream(99u, {1, 8});
  bool differs = false;
  for (int i = 0; i < 8; ++i) {
    const std::uint64_t a = s1.next_u64();
    CHECK(a == s2.next_u64());
    differs = differs || a != s3.next_u64();
  }
  CHECK(differs);
}

}  // TEST_SUITE
