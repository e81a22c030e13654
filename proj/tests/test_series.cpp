#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "meanlab/series.hpp"

using namespace meanlab;
using namespace meanlab::testing;

TEST_CASE("gen_binom product formula") {
  CHECK(gen_binom(0.5, 2) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(gen_binom(0.7, 0) == 1.0);
  CHECK(gen_binom(0.5, 3) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(gen_binom(3.0, 2) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(gen_binom(3.0, 4) == 0.0);  // integer alpha truncates
  CHECK_THROWS_AS(gen_binom(0.5, -1), PreconditionError);
}

TEST_CASE("sign_structure values and preconditions") {
  CHECK(sign_structure(0.5, 2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(sign_structure(0.5, 3) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(sign_structure(0.9, 2) == doctest::Approx(0.045).epsilon(1e-15));
  CHECK_THROWS_AS(sign_structure(1.5, 2), PreconditionError);
  CHECK_THROWS_AS(sign_structure(0.5, 1), PreconditionError);
}

TEST_CASE("sign_structure is positive on the full grid") {
  for (double lambda = 0.05; lambda < 0.96; lambda += 0.05)
    for (int k = 2; k <= 40; ++k)
      CHECK(sign_structure(1.0 - lambda, k) > 0.0);
}

TEST_CASE("series_precheck") {
  auto pre = series_precheck(scalar(0.2), scalar(0.4));
  CHECK(pre.radius == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pre.operative);
  CHECK(pre.strict_norm_condition);

  const auto a = make({{2, 1}, {1, 2}});
  pre = series_precheck(a, a);
  CHECK(pre.radius == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  CHECK(pre.operative);

  pre = series_precheck(scalar(3.0), scalar(1.0));
  CHECK(pre.radius == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(pre.operative);
  CHECK_FALSE(pre.strict_norm_condition);

  CHECK_THROWS_AS(series_precheck(SymMatrixd::diagonal({1.0, -1.0}), a),
                  DomainError);
}

TEST_CASE("gap_series scalar hand case") {
  const SeriesParams p(Weight(0.5), 64, 1e-12);
  const auto res = gap_series(scalar(0.2), scalar(0.4), p);
  REQUIRE(res.term_norms.size() >= 1);
  CHECK(res.term_norms[0] == doctest::Approx(0.0125).epsilon(1e-12));  // k = 2
  CHECK(res.converged);
  // converged sum equals the scalar gap 0.3 - sqrt(0.08)
  CHECK(res.partial_sum(0, 0) ==
        doctest::Approx(0.3 - std::sqrt(0.08)).epsilon(1e-10));
}

TEST_CASE("gap_series with equal inputs is zero after one term") {
  const auto a = make({{2, 1}, {1, 2}});
  const auto res = gap_series(a, a, SeriesParams(Weight(0.3)));
  CHECK(res.converged);
  CHECK(res.terms_used == 1);
  CHECK(res.partial_sum.frobenius_norm() == 0.0);
}

TEST_CASE("gap_series rejects divergent inputs") {
  CHECK_THROWS_AS(gap_series(scalar(3.0), scalar(1.0), SeriesParams(Weight(0.5))),
                  DomainError);
}

TEST_CASE("verify_gap_identity scalar and commuting cases") {
  CHECK(verify_gap_identity(scalar(0.2), scalar(0.4), Weight(0.5),
                            SeriesParams(Weight(0.5))) <= 1e-9);
  const auto a = make({{2, 1}, {1, 2}});
  CHECK(verify_gap_identity(a, a, Weight(0.4), SeriesParams(Weight(0.4))) <= 1e-14);

  // commuting 3x3 pair with spectra in (0, 1/2], lambda = 0.3
  const auto fam = ratio_bounded_pair(3, 0.01, 0.5, 0.4, 99);
  CHECK(verify_gap_identity(fam.matrices[0], fam.matrices[1], Weight(0.3),
                            SeriesParams(Weight(0.3))) <= 1e-9);
}

TEST_CASE("verify_gap_identity propagates NotConverged") {
  // radius 0.98 needs far more than 8 terms
  CHECK_THROWS_AS(verify_gap_identity(scalar(0.01), scalar(0.5), Weight(0.5),
                                      SeriesParams(Weight(0.5), 8, 1e-10)),
                  NotConverged);
}

TEST_CASE("identity holds on seeded commuting ordered pairs") {
  SplitMix64 rng(31);
  const SeriesParams base(Weight(0.5));
  int count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + static_cast<int>(rng.below(6));
    const auto fam = ratio_bounded_pair(dim, 0.01, 0.5, 0.35, rng.next());
    const double l = 0.1 + 0.1 * static_cast<double>(trial % 9);
    const SeriesParams p(Weight(l), base.max_terms, base.target_residual);
    CHECK(verify_gap_identity(fam.matrices[0], fam.matrices[1], Weight(l), p) <=
          10 * p.target_residual);
    ++count;
  }
  CHECK(count == 200);
}

TEST_CASE("term positivity and truncation monotonicity for commuting A <= B") {
  SplitMix64 rng(32);
  const Tolerance tol;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 1 + static_cast<int>(rng.below(4));
    const auto fam = ratio_bounded_pair(dim, 0.01, 0.5, 0.35, rng.next());
    const double l = rng.uniform(0.1, 0.9);
    const auto res = gap_series(fam.matrices[0], fam.matrices[1],
                                SeriesParams(Weight(l)));
    CHECK(res.converged);
    // each term PSD, so the partial sums are nondecreasing in Loewner order
    for (double min_eig : res.per_term_min_eigs)
      CHECK(min_eig >= -tol.psd_slack);
  }
}

TEST_CASE("scalar series matches the binomial series term by term") {
  SplitMix64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const double b = rng.uniform(0.1, 0.5);
    const double a = rng.uniform(0.4, 1.0) * b;
    const double l = rng.uniform(0.1, 0.9);
    const double x = a / b - 1.0;
    const auto res = gap_series(scalar(a), scalar(b), SeriesParams(Weight(l)));
    for (size_t i = 0; i < res.term_norms.size(); ++i) {
      const int k = static_cast<int>(i) + 2;
      // term_k = -C(1-lambda, k) b x^k, the k-th tail term of b (1+x)^{1-lambda}
      const double expected = -gen_binom(1.0 - l, k) * b * std::pow(x, k);
      const double got = res.coefficients[i] *
                         std::pow(-x, k) * b;  // reconstruct signed term
      CHECK(got == doctest::Approx(expected).epsilon(1e-13));
      CHECK(res.term_norms[i] == doctest::Approx(std::abs(expected)).epsilon(1e-10));
    }
  }
}
