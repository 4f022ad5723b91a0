#include <gtest/gtest.h>

#include <random>

#include "coalition/error.hpp"
#include "coalition/lp.hpp"
#include "coalition/reduction.hpp"
#include "oracles.hpp"

using namespace coalition;

TEST(Simplex, BoundedMaximum) {
  LinearProgram<Rational> lp(Sense::kMaximize, {1});
  lp.add_row({1}, Relation::kLessEqual, 3);
  const auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::kOptimal);
  EXPECT_EQ(out.value, 3);
}

TEST(Simplex, Infeasible) {
  LinearProgram<Rational> lp(Sense::kMaximize, {1});
  lp.add_row({-1}, Relation::kLessEqual, -1);
  lp.add_row({1}, Relation::kLessEqual, 0);
  EXPECT_EQ(solve(lp).status, LpStatus::kInfeasible);
}

TEST(Simplex, Unbounded) {
  LinearProgram<Rational> lp(Sense::kMaximize, {1, 1});
  lp.add_row({1, -1}, Relation::kLessEqual, 1);
  EXPECT_EQ(solve(lp).status, LpStatus::kUnbounded);
}

TEST(Simplex, BordaPolytopeCorner) {
  const LinearProgram<Rational> lp = dual_lp(make_margins(1, 1, 4), ScoreVector::borda(4));
  const auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::kOptimal);
  EXPECT_EQ(out.value, 3);
  EXPECT_EQ(out.point, (std::vector<Rational>{make_rational(3, 2), make_rational(3, 2)}));
}

TEST(Simplex, RaggedRowsRejected) {
  LinearProgram<Rational> lp(Sense::kMinimize, {1, 1});
  lp.add_row({1}, Relation::kGreaterEqual, 1);
  EXPECT_THROW(solve(lp), Error);
}

TEST(Simplex, DegenerateCyclingExample) {
  // Beale's example cycles under the textbook rule; Bland's rule terminates.
  LinearProgram<Rational> lp(Sense::kMinimize,
                             {make_rational(-3, 4), 150, make_rational(-1, 50), 6});
  lp.add_row({make_rational(1, 4), -60, make_rational(-1, 25), 9}, Relation::kLessEqual, 0);
  lp.add_row({make_rational(1, 2), -90, make_rational(-1, 50), 3}, Relation::kLessEqual, 0);
  lp.add_row({0, 0, 1, 0}, Relation::kLessEqual, 1);
  const auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::kOptimal);
  EXPECT_EQ(out.value, make_rational(-1, 20));
}

TEST(Duality, StratifiedAgainstDual) {
  const MarginPair margins = make_margins(3, 1, 4);
  const ScoreVector w = ScoreVector::borda(4);
  EXPECT_EQ(dual_gap_check(stratified_lp(margins, w), dual_lp(margins, w)), 0);
}

TEST(Duality, InfeasibleUnboundedPair) {
  const MarginPair margins = make_margins(2, make_rational(1, 2), 3);
  const ScoreVector w = ScoreVector::antiplurality(3);
  EXPECT_EQ(solve(stratified_lp(margins, w)).status, LpStatus::kInfeasible);
  EXPECT_EQ(solve(dual_lp(margins, w)).status, LpStatus::kUnbounded);
  EXPECT_EQ(dual_gap_check(stratified_lp(margins, w), dual_lp(margins, w)), 0);
}

TEST(Duality, IdenticalPrograms) {
  LinearProgram<Rational> lp(Sense::kMinimize, {1, 2});
  lp.add_row({1, 1}, Relation::kGreaterEqual, 4);
  EXPECT_EQ(dual_gap_check(lp, dual_program(lp)), 0);
  EXPECT_EQ(solve(dual_program(dual_program(lp))).value, solve(lp).value);
}

TEST(Duality, MismatchedStatusesThrow) {
  LinearProgram<Rational> feasible(Sense::kMinimize, {1});
  feasible.add_row({1}, Relation::kGreaterEqual, 1);
  LinearProgram<Rational> infeasible(Sense::kMaximize, {1});
  infeasible.add_row({1}, Relation::kLessEqual, -1);
  EXPECT_THROW(dual_gap_check(feasible, infeasible), Error);
}

TEST(Oracle, RandomLpsMatchVertexEnumeration) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    const auto lp = oracle::random_small_lp(rng, 2 + i % 2, 2 + i % 3);
    const auto exact = solve(lp);
    const auto brute = oracle::vertex_enumeration(lp);
    ASSERT_EQ(exact.status, brute.status) << "lp " << i;
    if (exact.status == LpStatus::kOptimal) {
      EXPECT_EQ(exact.value, brute.value) << "lp " << i;
      EXPECT_EQ(max_violation(lp, exact.point), 0) << "lp " << i;
    }
    EXPECT_EQ(dual_gap_check(lp, dual_program(lp)), 0) << "lp " << i;
  }
}

TEST(Oracle, DoubleSolverTracksExact) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    const auto lp = oracle::random_small_lp(rng, 3, 3);
    LinearProgram<double> approx(lp.sense, {});
    for (const auto& c : lp.objective) approx.objective.push_back(to_double(c));
    for (const auto& r : lp.rows) {
      std::vector<double> a;
      for (const auto& x : r.coeffs) a.push_back(to_double(x));
      approx.add_row(std::move(a), r.relation, to_double(r.rhs));
    }
    const auto exact = solve(lp);
    const auto fp = solve(approx);
    ASSERT_EQ(exact.status, fp.status) << "lp " << i;
    if (exact.status == LpStatus::kOptimal) EXPECT_NEAR(fp.value, to_double(exact.value), 1e-8);
  }
}

TEST(Scaling, ValueScalesWithRightHandSide) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    auto lp = oracle::random_small_lp(rng, 3, 3);
    const auto base = solve(lp);
    for (auto& r : lp.rows) r.rhs *= 3;
    const auto scaled = solve(lp);
    // Homogeneous in the rhs: the feasible set scales by 3, so does the optimum.
    ASSERT_EQ(base.status == LpStatus::kInfeasible, scaled.status == LpStatus::kInfeasible);
    if (base.status == LpStatus::kOptimal && scaled.status == LpStatus::kOptimal) {
      EXPECT_EQ(scaled.value, 3 * base.value);
    }
  }
}
