#include <doctest.h>

#include <cmath>
#include <limits>

#include "genecop/types.hpp"

using namespace genecop;

TEST_SUITE("types") {

TEST_CASE("position standardization maps equally spaced coordinates exactly") {
  GeneRegion region;
  region.name = "g1";
  region.positions = {196621008.0, 196668821.0, 196716634.0};
  region.variant_ids = {"v1", "v2", "v3"};
  const auto u = standardize_positions(region);
  REQUIRE(u.size() == 3);
  CHECK(u[0] == 0.0);
  CHECK(u[1] == 0.5);  // exact: the middle point bisects the span
  CHECK(u[2] == 1.0);
}

TEST_CASE("position standardization is invariant to affine coordinate maps") {
  GeneRegion a;
  a.name = "a";
  a.positions = {1000.0, 1700.0, 2400.0, 9000.0, 12345.0};
  a.variant_ids = {"1", "2", "3", "4", "5"};
  GeneRegion b = a;
  for (auto& p : b.positions) p = 3.25 * p + 1.0e7;
  const auto ua = standardize_positions(a);
  const auto ub = standardize_positions(b);
  for (std::size_t j = 0; j < ua.size(); ++j)
    CHECK(ua[j] == doctest::Approx(ub[j]).epsilon(1e-13));
  CHECK(ua.front() == 0.0);
  CHECK(ua.back() == 1.0);
}

TEST_CASE("region validation rejects structural defects") {
  GeneRegion r;
  r.name = "bad";
  r.positions = {10.0, 10.0};
  r.variant_ids = {"a", "b"};
  CHECK_THROWS_AS(validate_region(r), InvalidRegionError);  // duplicate

  r.positions = {20.0, 10.0};
  CHECK_THROWS_AS(validate_region(r), InvalidRegionError);  // decreasing

  r.positions = {10.0};
  r.variant_ids = {"a"};
  CHECK_THROWS_AS(validate_region(r), InvalidRegionError);  // too small

  r.positions = {10.0, std::numeric_limits<double>::infinity()};
  r.variant_ids = {"a", "b"};
  CHECK_THROWS_AS(validate_region(r), InvalidRegionError);  // non-finite

  r.positions = {10.0, 20.0};
  r.variant_ids = {"a"};
  CHECK_THROWS_AS(validate_region(r), InvalidRegionError);  // id count
}

TEST_CASE("record validation enforces dosage and covariate contracts") {
  SubjectRecord rec;
  rec.id = "s1";
  rec.y1 = 1.0;
  rec.y2 = 2.0;
  rec.covariates = {0.5};
  rec.genotypes = {0.0, 1.0, 2.0};
  CHECK_NOTHROW(validate_record(rec, 1, 3));

  SUBCASE("missing call is allowed") {
    rec.genotypes[1] = kMissingGenotype;
    CHECK_NOTHROW(validate_record(rec, 1, 3));
  }
  SUBCASE("fractional dosage rejected") {
    rec.genotypes[1] = 1.5;
    CHECK_THROWS_AS(validate_record(rec, 1, 3), DomainError);
  }
  SUBCASE("dosage beyond 2 rejected") {
    rec.genotypes[1] = 3.0;
    CHECK_THROWS_AS(validate_record(rec, 1, 3), DomainError);
  }
  SUBCASE("negative follow-up time rejected") {
    rec.y1 = -0.1;
    CHECK_THROWS_AS(validate_record(rec, 1, 3), DomainError);
  }
  SUBCASE("non-finite follow-up time rejected") {
    rec.y2 = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate_record(rec, 1, 3), DomainError);
  }
  SUBCASE("covariate count must match") {
    CHECK_THROWS_AS(validate_record(rec, 2, 3), DomainError);
  }
  SUBCASE("genotype count must match") {
    CHECK_THROWS_AS(validate_record(rec, 1, 4), DomainError);
  }
}

TEST_CASE("basis specifications validate family-specific constraints") {
  CHECK_NOTHROW(validate_basis_spec(BasisSpec::bspline(5, 4)));
  CHECK_NOTHROW(validate_basis_spec(BasisSpec::bspline(2, 2)));
  CHECK_THROWS_AS(BasisSpec::bspline(3, 4), DomainError);   // n < order
  CHECK_THROWS_AS(BasisSpec::bspline(4, 1), DomainError);   // order < 2
  CHECK_THROWS_AS(BasisSpec::bspline(0, 4), DomainError);
  CHECK_NOTHROW(validate_basis_spec(BasisSpec::fourier(5)));
  CHECK_NOTHROW(validate_basis_spec(BasisSpec::fourier(1)));
  CHECK_THROWS_AS(BasisSpec::fourier(4), DomainError);      // even size
  CHECK_THROWS_AS(BasisSpec::fourier(-1), DomainError);
}

TEST_CASE("model specification requires an adequate genotype smoother") {
  ModelSpec spec;
  spec.flm_mode = FlmMode::SmoothBoth;
  spec.gvf_basis = BasisSpec::bspline(4, 4);
  spec.gef_basis = BasisSpec::bspline(5, 4);
  CHECK_THROWS_AS(validate_model_spec(spec), DomainError);

  spec.gvf_basis = BasisSpec::bspline(5, 4);
  CHECK_NOTHROW(validate_model_spec(spec));

  // The genotype smoother is irrelevant when only the effect is smoothed.
  spec.flm_mode = FlmMode::SmoothEffectOnly;
  spec.gvf_basis = BasisSpec::bspline(4, 4);
  CHECK_NOTHROW(validate_model_spec(spec));
}

TEST_CASE("unconstrained transform matches logs and round-trips") {
  NaturalParams nat;
  nat.lambda1 = 8.0;
  nat.k1 = 2.2;
  nat.lambda2 = 1.7;
  nat.k2 = 0.8;
  nat.beta = Eigen::VectorXd(2);
  nat.beta << 0.3, -1.2;
  nat.gamma = Eigen::VectorXd(3);
  nat.gamma << 0.1, -0.2, 0.05;
  nat.eta = 4.0 / 3.0;

  const ParameterVector p = to_unconstrained(nat, CopulaKind::Clayton);
  CHECK(p.log_lambda1 ==
        doctest::Approx(2.0794415416798359).epsilon(1e-15));  // log 8
  CHECK(p.dep.has_value());
  CHECK(*p.dep == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-15));

  const NaturalParams back = from_unconstrained(p, CopulaKind::Clayton);
  CHECK(back.lambda1 == doctest::Approx(nat.lambda1).epsilon(1e-14));
  CHECK(back.k1 == doctest::Approx(nat.k1).epsilon(1e-14));
  CHECK(back.lambda2 == doctest::Approx(nat.lambda2).epsilon(1e-14));
  CHECK(back.k2 == doctest::Approx(nat.k2).epsilon(1e-14));
  REQUIRE(back.eta.has_value());
  CHECK(*back.eta == doctest::Approx(*nat.eta).epsilon(1e-14));
  CHECK(back.beta.isApprox(nat.beta, 1e-14));
  CHECK(back.gamma.isApprox(nat.gamma, 1e-14));
}

TEST_CASE("gumbel dependence maps through log(eta - 1)") {
  NaturalParams nat;
  nat.eta = 2.5;
  const ParameterVector p = to_unconstrained(nat, CopulaKind::Gumbel);
  REQUIRE(p.dep.has_value());
  CHECK(*p.dep == doctest::Approx(std::log(1.5)).epsilon(1e-15));
  const NaturalParams back = from_unconstrained(p, CopulaKind::Gumbel);
  CHECK(*back.eta == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("unconstrained transform rejects out-of-domain naturals") {
  NaturalParams nat;
  SUBCASE("zero scale") {
    nat.lambda1 = 0.0;
    CHECK_THROWS_AS(to_unconstrained(nat, CopulaKind::Independence),
                    DomainError);
  }
  SUBCASE("negative shape") {
    nat.k2 = -1.0;
    CHECK_THROWS_AS(to_unconstrained(nat, CopulaKind::Independence),
                    DomainError);
  }
  SUBCASE("clayton dependence must be positive") {
    nat.eta = 0.0;
    CHECK_THROWS_AS(to_unconstrained(nat, CopulaKind::Clayton), DomainError);
  }
  SUBCASE("clayton requires a dependence parameter") {
    CHECK_THROWS_AS(to_unconstrained(nat, CopulaKind::Clayton), DomainError);
  }
  SUBCASE("gumbel dependence must exceed one") {
    nat.eta = 1.0;
    CHECK_THROWS_AS(to_unconstrained(nat, CopulaKind::Gumbel), DomainError);
  }
  SUBCASE("independence must not carry a dependence parameter") {
    nat.eta = 2.0;
    CHECK_THROWS_AS(to_unconstrained(nat, CopulaKind::Independence),
                    DomainError);
  }
  SUBCASE("packed vector with mismatched dependence rejected") {
    ParameterVector p;
    p.dep = 0.5;
    CHECK_THROWS_AS(from_unconstrained(p, CopulaKind::Independence),
                    DomainError);
    ParameterVector q;
    CHECK_THROWS_AS(from_unconstrained(q, CopulaKind::Clayton), DomainError);
  }
}

}  // TEST_SUITE
