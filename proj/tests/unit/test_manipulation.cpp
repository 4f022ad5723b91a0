#include <gtest/gtest.h>

#include <random>
#include <string>

#include "coalition/error.hpp"
#include "coalition/manipulation.hpp"
#include "coalition/reduction.hpp"
#include "oracles.hpp"

using namespace coalition;

namespace {

constexpr std::size_t kAbc = 0, kAcb = 1, kBac = 2, kBca = 3, kCab = 4, kCba = 5;

Profile make_profile(std::initializer_list<std::pair<std::size_t, std::int64_t>> counts) {
  Profile p(3);
  for (auto [t, c] : counts) p.add(t, c);
  return p;
}

// Small random profiles with a strict winner.
std::vector<Profile> random_profiles(int m, int count, std::int64_t max_n, std::uint64_t seed, const ScoreVector& w) {
  std::vector<Profile> out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> ndist(3, max_n);
  std::uint64_t index = 0;
  while (static_cast<int>(out.size()) < count) {
    Engine e = make_engine(seed, StreamTag::kProfile, index++);
    Profile p = sample_ic(ndist(rng), m, e);
    if (top_two(Scoreboard(p, w)).strict) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

TEST(Q1, PluralityTieSuffices) {
  const Profile p = make_profile({{kAbc, 4}, {kBac, 3}, {kCba, 1}});
  const ManipulationInstance inst(p, ScoreVector::plurality(3), 1);
  const ExactResult r = q1(inst);
  ASSERT_TRUE(r.size.is_finite());
  EXPECT_EQ(r.size.value(), 1);
  ASSERT_TRUE(r.plan);
  EXPECT_EQ(r.plan->x[kCba], 1);
  EXPECT_EQ(oracle::brute_force_q1(p, ScoreVector::plurality(3), 1, 4).value(), 1);
}

TEST(Q1, StrictWinNeedsMore) {
  const Profile p = make_profile({{kAbc, 4}, {kBac, 3}, {kCba, 1}});
  const ManipulationInstance inst(p, ScoreVector::plurality(3), 1);
  ExactOptions strict;
  strict.success = SuccessRule::kStrictWin;
  EXPECT_EQ(q1(inst, strict).size, oracle::brute_force_q1(p, ScoreVector::plurality(3), 1, 8, true));
}

TEST(Q1, NobodyPrefersTarget) {
  const Profile p = make_profile({{kAbc, 5}, {kAcb, 2}});
  const ManipulationInstance inst(p, ScoreVector::borda(3), 1);
  EXPECT_TRUE(q1(inst).size.is_unreachable());
}

TEST(Q1, BordaAgainstBruteForce) {
  const ScoreVector w = ScoreVector::borda(3);
  const Profile p = make_profile({{kAbc, 5}, {kBca, 1}, {kCba, 2}});
  const ManipulationInstance inst(p, w, 1);
  const auto expected = oracle::brute_force_q1(p, w, 1, 7);
  ASSERT_TRUE(expected.is_finite());
  EXPECT_EQ(q1(inst).size, expected);
}

TEST(Q1, TargetFirstBallotsSuffice) {
  // Restricting insincere ballots to target-first types never loses.
  for (const char* rule : {"plurality", "borda", "antiplurality", "weights:1,1/4,0"}) {
    const ScoreVector w = parse_rule(rule, 3);
    for (const Profile& p : random_profiles(3, 25, 9, 5, w)) {
      const auto top = top_two(Scoreboard(p, w));
      for (Candidate beta = 0; beta < 3; ++beta) {
        if (beta == top.a) continue;
        const ManipulationInstance inst(p, w, beta);
        ExactOptions all;
        all.ballots = BallotSpace::kAllTypes;
        const auto restricted = q1(inst).size;
        EXPECT_EQ(restricted, q1(inst, all).size) << rule;
        EXPECT_EQ(restricted, oracle::brute_force_q1(p, w, beta, p.n())) << rule;
      }
    }
  }
}

TEST(Q1, RejectsLargeM) {
  const ScoreVector w = ScoreVector::borda(5);
  Profile p(5);
  p.add(std::size_t{0}, 3);
  p.add(std::size_t{100}, 1);
  const ManipulationInstance inst(p, w, 1);
  try {
    q1(inst);
    FAIL() << "expected InstanceTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInstanceTooLarge);
  }
}

TEST(Instance, Preconditions) {
  const Profile tied = make_profile({{kAbc, 1}, {kBac, 1}});
  EXPECT_THROW(ManipulationInstance(tied, ScoreVector::plurality(3), 2), Error);
  const Profile clear = make_profile({{kAbc, 2}, {kBac, 1}});
  EXPECT_THROW(ManipulationInstance(clear, ScoreVector::plurality(3), 0), Error);
}

TEST(Mcs, MinimisedOverTargets) {
  const Profile p = make_profile({{kAbc, 4}, {kBac, 3}, {kCba, 1}});
  const McsResult r = mcs_exact(p, ScoreVector::plurality(3));
  EXPECT_EQ(r.size, Extended<std::int64_t>(1));
  EXPECT_EQ(r.target, 1);
}

TEST(Mcs, UnreachableCases) {
  EXPECT_TRUE(mcs_exact(make_profile({{kAbc, 9}}), ScoreVector::borda(3)).size.is_unreachable());
  EXPECT_TRUE(mcs_exact(make_profile({{kAbc, 1}}), ScoreVector::plurality(3)).size.is_unreachable());
}

TEST(Mcs, AgreesWithBruteForce) {
  for (const char* rule : {"plurality", "borda", "weights:1,2/3,0"}) {
    const ScoreVector w = parse_rule(rule, 3);
    for (const Profile& p : random_profiles(3, 30, 12, 6, w)) {
      EXPECT_EQ(mcs_exact(p, w).size, oracle::brute_force_mcs(p, w, p.n())) << rule;
    }
  }
}

TEST(Relaxations, KConstant) {
  EXPECT_EQ(k_constant(ScoreVector::plurality(3)), 12);
  EXPECT_EQ(k_constant(ScoreVector::antiplurality(5)), 0);
  EXPECT_EQ(k_constant(ScoreVector::borda(4)), 72);
}

TEST(Relaxations, ChainOfBounds) {
  for (const char* rule : {"plurality", "borda", "antiplurality"}) {
    for (int m : {3, 4}) {
      const ScoreVector w = parse_rule(rule, m);
      const Rational k = k_constant(w);
      for (const Profile& p : random_profiles(m, 25, 14, 7, w)) {
        const auto top = top_two(Scoreboard(p, w));
        for (Candidate beta = 0; beta < m; ++beta) {
          if (beta == top.a) continue;
          const ManipulationInstance inst(p, w, beta);
          const ExtRational lp3 = q3(inst);
          const ExtRational lp2 = q2(inst, k);
          const auto exact = q1(inst).size;
          const ExtRational ex = exact.is_finite() ? ExtRational(Rational(exact.value())) : ExtRational();
          EXPECT_LE(lp3, ex) << rule;
          EXPECT_LE(lp3, lp2) << rule;
          if (lp2.is_finite()) {
            ASSERT_TRUE(exact.is_finite()) << rule;
            EXPECT_LE(ex.value(), lp2.value() + k) << rule;
          }
        }
      }
    }
  }
}

TEST(Relaxations, AdjacentProgramIsBestTarget) {
  for (const char* rule : {"plurality", "borda", "approval:2", "antiplurality"}) {
    for (int m : {3, 4}) {
      if (std::string(rule) == "approval:2" && m == 3) continue;
      const ScoreVector w = parse_rule(rule, m);
      for (const Profile& p : random_profiles(m, 40, 40, 8, w)) {
        const Scoreboard s(p, w);
        const auto top = top_two(s);
        ExtRational best;
        ExtRational at_b;
        for (Candidate beta = 0; beta < m; ++beta) {
          if (beta == top.a) continue;
          const ExtRational v = q3(ManipulationInstance(p, w, beta));
          if (v < best) best = v;
          if (beta == top.b) at_b = v;
        }
        const ExtRational adj = q_adjacent(s, w);
        EXPECT_EQ(adj, at_b) << rule;
        EXPECT_EQ(adj, best) << rule;
        EXPECT_EQ(adj, q_dual(margins_of(s), mw_polytope(w)).value) << rule;
      }
    }
  }
}

TEST(Relaxations, AntipluralityRelaxationIsIntegral) {
  const ScoreVector w = ScoreVector::antiplurality(3);
  for (const Profile& p : random_profiles(3, 50, 40, 9, w)) {
    const auto top = top_two(Scoreboard(p, w));
    for (Candidate beta = 0; beta < 3; ++beta) {
      if (beta == top.a) continue;
      const ExtRational v = q2(ManipulationInstance(p, w, beta), 0);
      if (v.is_finite()) EXPECT_TRUE(is_integral(v.value()));
    }
  }
}

TEST(Relaxations, AntipluralityBelowMeanIsUnreachable) {
  // Scores a:5, c:3, b:2 with mean 10/3 put the runner-up below the mean.
  const Profile p = make_profile({{kAbc, 1}, {kAcb, 1}, {kBac, 1}, {kCab, 2}});
  const ScoreVector w = ScoreVector::antiplurality(3);
  const Scoreboard s(p, w);
  ASSERT_LT(s.score(top_two(s).b), s.mean_score());
  EXPECT_TRUE(q_adjacent(s, w).is_unreachable());
}

TEST(Relaxations, ShrinksWithMargin) {
  // Under plurality the adjacent value is the score gap, shrinking to the tie.
  const ScoreVector w = ScoreVector::plurality(3);
  ExtRational prev;
  for (std::int64_t gap : {6, 4, 2, 1}) {
    const Profile p = make_profile({{kAbc, 10}, {kBac, 10 - gap}, {kCba, 3}});
    const ExtRational v = q_adjacent(p, w);
    ASSERT_TRUE(v.is_finite());
    EXPECT_EQ(v.value(), gap);
    if (prev.is_finite()) {
      EXPECT_LT(v, prev);
    }
    prev = v;
  }
}
