#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "meanlab/alzer.hpp"
#include "meanlab/series.hpp"

using namespace meanlab;
using namespace meanlab::testing;

TEST_CASE("ScalarTuple validation") {
  CHECK_THROWS_AS(ScalarTuple({0.2}, {0.5, 0.5}), PreconditionError);
  CHECK_THROWS_AS(ScalarTuple({0.6}, {1.0}), PreconditionError);  // above 1/2
  CHECK_THROWS_AS(ScalarTuple({0.2, 0.3}, {0.5, 0.6}), PreconditionError);
  CHECK_THROWS_AS(ScalarTuple({0.2, 0.3}, {-0.5, 1.5}), PreconditionError);
  CHECK_NOTHROW(ScalarTuple({0.2, 0.5}, {0.25, 0.75}));
}

TEST_CASE("scalar_alzer_gap hand cases") {
  const auto g = scalar_alzer_gap(ScalarTuple({0.2, 0.4}, {0.5, 0.5}));
  CHECK(g.lhs == doctest::Approx(0.7 - std::sqrt(0.48)).epsilon(1e-12));
  CHECK(g.rhs == doctest::Approx(0.3 - std::sqrt(0.08)).epsilon(1e-12));
  CHECK(g.lhs == doctest::Approx(0.00717968).epsilon(1e-6));
  CHECK(g.rhs == doctest::Approx(0.01715729).epsilon(1e-6));
  CHECK(g.lhs <= g.rhs + 1e-12);

  const auto eq = scalar_alzer_gap(ScalarTuple({0.3, 0.3, 0.3}, {0.2, 0.3, 0.5}));
  CHECK(eq.lhs == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  CHECK(eq.rhs == doctest::Approx(0.0).epsilon(1e-12).scale(1));

  const auto half = scalar_alzer_gap(ScalarTuple({0.5, 0.5, 0.5}, {0.1, 0.2, 0.7}));
  CHECK(half.lhs == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  CHECK(half.rhs == doctest::Approx(0.0).epsilon(1e-12).scale(1));
}

TEST_CASE("scalar inequality holds on seeded tuples") {
  SplitMix64 rng(61);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    std::vector<double> xs, ws;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
      xs.push_back(rng.uniform(1e-3, 0.5));
      ws.push_back(rng.uniform(0.1, 1.0));
      sum += ws.back();
    }
    for (auto& w : ws) w /= sum;
    // renormalize exactly enough for the invariant
    double s2 = 0;
    for (double w : ws) s2 += w;
    ws.back() += 1.0 - s2;
    const auto g = scalar_alzer_gap(ScalarTuple(xs, ws));
    CHECK(g.lhs >= -1e-15);
    CHECK(g.rhs >= -1e-15);
    CHECK(g.lhs <= g.rhs + 1e-12);
  }
}

TEST_CASE("operator_alzer_check 1x1 matches the scalar oracle") {
  const auto rec = operator_alzer_check(scalar(0.2), scalar(0.4), Weight(0.5));
  const auto g = scalar_alzer_gap(ScalarTuple({0.2, 0.4}, {0.5, 0.5}));
  CHECK(rec.gap_min_eig == doctest::Approx(g.rhs - g.lhs).epsilon(1e-12));
  CHECK(rec.gap_min_eig == doctest::Approx(0.00997761).epsilon(1e-6));
  CHECK_FALSE(rec.violated);
  CHECK(rec.commuting);
  CHECK(rec.ordered);
  CHECK(rec.in_range);
  CHECK(rec.lambda_in_range);
}

TEST_CASE("operator_alzer_check equal inputs give zero gap") {
  const auto fam = ratio_bounded_pair(3, 0.05, 0.5, 0.5, 7);
  const auto& a = fam.matrices[0];
  const auto rec = operator_alzer_check(a, a, Weight(0.3));
  CHECK(std::abs(rec.gap_min_eig) < 1e-12);
  CHECK_FALSE(rec.violated);
}

TEST_CASE("operator_alzer_check hypothesis flags are recorded, not enforced") {
  // lambda > 1/2, non-ordered, out-of-range inputs still run
  const auto rec = operator_alzer_check(scalar(0.9), scalar(0.3), Weight(0.8));
  CHECK_FALSE(rec.ordered);
  CHECK_FALSE(rec.in_range);
  CHECK_FALSE(rec.lambda_in_range);
  CHECK_THROWS_AS(operator_alzer_check(SymMatrixd::diagonal({1.0, -0.5}),
                                       SymMatrixd::diagonal({0.3, 0.3}),
                                       Weight(0.5)),
                  DomainError);
}

TEST_CASE("commuting gap decomposes into scalar channels") {
  // joint-diagonalization brute-force oracle
  SplitMix64 rng(62);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 2 + static_cast<int>(rng.below(3));
    Eigen::VectorXd ea(dim), eb(dim);
    for (int i = 0; i < dim; ++i) {
      const double u = rng.uniform(0.02, 0.5), v = rng.uniform(0.02, 0.5);
      ea[i] = std::min(u, v);
      eb[i] = std::max(u, v);
    }
    const auto fam = joint_family(dim, {ea, eb}, rng.next());
    const double l = rng.uniform(0.05, 0.5);
    const auto rec =
        operator_alzer_check(fam.matrices[0], fam.matrices[1], Weight(l));
    double channel_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
      const double rhs = scalar_gap(ea[i], eb[i], l);
      const double lhs = scalar_gap(1.0 - eb[i], 1.0 - ea[i], l);
      channel_min = std::min(channel_min, rhs - lhs);
    }
    CHECK(rec.gap_min_eig == doctest::Approx(channel_min).epsilon(1e-10).scale(1));
    CHECK_FALSE(rec.violated);
  }
}

TEST_CASE("series route agrees with the closed-form route") {
  // RHS - LHS equals the difference of the two gap series, term-route vs
  // closed-form-route, on commuting ordered pairs.
  SplitMix64 rng(63);
  for (int trial = 0; trial < 15; ++trial) {
    const int dim = 1 + static_cast<int>(rng.below(4));
    const auto fam = ratio_bounded_pair(dim, 0.02, 0.5, 0.4, rng.next());
    const auto& a = fam.matrices[0];
    const auto& b = fam.matrices[1];
    const double l = rng.uniform(0.05, 0.5);
    const auto rec = operator_alzer_check(a, b, Weight(l));
    const SeriesParams p(Weight(l), 128, 1e-12);
    const auto rhs_series = gap_series(a, b, p);
    const auto lhs_series = gap_series(complement(b), complement(a), p);
    REQUIRE(rhs_series.converged);
    REQUIRE(lhs_series.converged);
    const double series_min =
        min_eigenvalue(rhs_series.partial_sum - lhs_series.partial_sum);
    CHECK(std::abs(series_min - rec.gap_min_eig) <= 1e-8);
  }
}

TEST_CASE("classic_corollary_check") {
  const auto rec = classic_corollary_check(scalar(0.2), scalar(0.4));
  CHECK(rec.gap_min_eig == doctest::Approx(0.00997761).epsilon(1e-6));
  REQUIRE(rec.symmetry_residual.has_value());
  CHECK(*rec.symmetry_residual <= 1e-10);

  const auto swapped = classic_corollary_check(scalar(0.4), scalar(0.2));
  CHECK(std::abs(swapped.gap_min_eig - rec.gap_min_eig) <= 1e-10);

  const auto fam = ratio_bounded_pair(3, 0.05, 0.5, 0.5, 17);
  const auto eq = classic_corollary_check(fam.matrices[0], fam.matrices[0]);
  CHECK(std::abs(eq.gap_min_eig) < 1e-12);
}

TEST_CASE("open_problem_trial hand cases") {
  const auto a = make({{0.3, 0.05}, {0.05, 0.3}});
  auto rec = open_problem_trial({a, a, a});
  CHECK(std::abs(rec.gap_min_eig) < 1e-10);

  rec = open_problem_trial({scalar(0.2), scalar(0.3), scalar(0.4)});
  const double g3 = std::cbrt(0.2 * 0.3 * 0.4);
  const double g3p = std::cbrt(0.8 * 0.7 * 0.6);
  const double expected = (0.3 - g3) - (0.7 - g3p);
  CHECK(rec.gap_min_eig == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rec.gap_min_eig == doctest::Approx(0.00676).epsilon(1e-3));
  CHECK_FALSE(rec.violated);
  CHECK(rec.in_range);
  CHECK(rec.commuting);

  CHECK_THROWS_AS(open_problem_trial({scalar(0.2)}), PreconditionError);
  CHECK_THROWS_AS(open_problem_trial({scalar(0.2), SymMatrixd::diagonal({1.0, -1.0})}),
                  DomainError);
}

TEST_CASE("open_problem_trial commuting triple decomposes into channels") {
  SplitMix64 rng(64);
  for (int trial = 0; trial < 15; ++trial) {
    Eigen::VectorXd e1(2), e2(2), e3(2);
    for (int i = 0; i < 2; ++i) {
      e1[i] = rng.uniform(0.02, 0.5);
      e2[i] = rng.uniform(0.02, 0.5);
      e3[i] = rng.uniform(0.02, 0.5);
    }
    const auto fam = joint_family(2, {e1, e2, e3}, rng.next());
    const auto rec = open_problem_trial(fam.matrices);
    double channel_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i) {
      const double an = (e1[i] + e2[i] + e3[i]) / 3.0;
      const double gn = std::cbrt(e1[i] * e2[i] * e3[i]);
      const double anp = 1.0 - an;
      const double gnp = std::cbrt((1 - e1[i]) * (1 - e2[i]) * (1 - e3[i]));
      channel_min = std::min(channel_min, (an - gn) - (anp - gnp));
    }
    CHECK(rec.gap_min_eig == doctest::Approx(channel_min).epsilon(1e-9).scale(1));
  }
}
