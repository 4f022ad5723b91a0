#include <gtest/gtest.h>

#include <cmath>

#include "coalition/election.hpp"
#include "coalition/error.hpp"

using namespace coalition;

namespace {

// m = 3 type indices in lexicographic order.
constexpr std::size_t kAbc = 0, kAcb = 1, kBac = 2, kBca = 3, kCab = 4, kCba = 5;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no coalition::Error thrown";
  return Errc::kNumericalFailure;
}

}  // namespace

TEST(ScoreVector, NormalizesAffinely) {
  const std::vector<Rational> raw{4, 3, 2, 1};
  const ScoreVector w = ScoreVector::normalize(raw);
  EXPECT_EQ(w.weights(), (std::vector<Rational>{1, make_rational(2, 3), make_rational(1, 3), 0}));
  EXPECT_EQ(w, ScoreVector::borda(4));
  const std::vector<Rational> plur{1, 0, 0};
  EXPECT_EQ(ScoreVector::normalize(plur), ScoreVector::plurality(3));
}

TEST(ScoreVector, RejectsBadInput) {
  const std::vector<Rational> flat{5, 5, 5};
  EXPECT_EQ(code_of([&] { ScoreVector::normalize(flat); }), Errc::kConstantVector);
  const std::vector<Rational> up{0, 1, 2};
  EXPECT_EQ(code_of([&] { ScoreVector::normalize(up); }), Errc::kNotMonotone);
  const std::vector<Rational> two{1, 0};
  EXPECT_EQ(code_of([&] { ScoreVector::normalize(two); }), Errc::kTooFewCandidates);
  EXPECT_EQ(code_of([] { parse_rule("nonsense", 3); }), Errc::kRuleParse);
}

TEST(ScoreVector, ParsesNamedRules) {
  EXPECT_EQ(parse_rule("borda", 4), ScoreVector::borda(4));
  EXPECT_EQ(parse_rule("approval:2", 5), ScoreVector::approval(5, 2));
  EXPECT_EQ(parse_rule("antiplurality", 3), ScoreVector::antiplurality(3));
  EXPECT_EQ(parse_rule("weights:1,1,0.5,0", 4).weights(), (std::vector<Rational>{1, 1, make_rational(1, 2), 0}));
  EXPECT_EQ(parse_rule(rule_string(ScoreVector::borda(5)), 5), ScoreVector::borda(5));
}

TEST(ScoreVector, MomentsOfBorda) {
  const ScoreVector w = ScoreVector::borda(4);
  EXPECT_EQ(w.mean(), make_rational(1, 2));
  // sigma^2 = (m+1)/(12(m-1)) for Borda.
  EXPECT_EQ(w.variance(), make_rational(5, 36));
  EXPECT_NEAR(w.sigma(), std::sqrt(5.0) / 6.0, 1e-12);
}

TEST(VoterType, IndexRoundTrip) {
  for (int m = 3; m <= 5; ++m) {
    for (std::size_t t = 0; t < factorial(m); ++t) EXPECT_EQ(VoterType::from_index(m, t).index(), t);
  }
  EXPECT_EQ(VoterType({2, 1, 0}).index(), kCba);
  EXPECT_EQ(VoterType({1, 0, 2}).index(), kBac);
}

TEST(VoterType, PositionalScore) {
  const VoterType abc({0, 1, 2});
  const VoterType bac({1, 0, 2});
  EXPECT_EQ(sigma(abc, 0, ScoreVector::plurality(3)), 1);
  EXPECT_EQ(sigma(abc, 2, ScoreVector::borda(3)), 0);
  EXPECT_EQ(sigma(bac, 0, ScoreVector::borda(3)), make_rational(1, 2));
}

TEST(Scoreboard, PluralityTally) {
  Profile p(3);
  p.add(kAbc, 4);
  p.add(kBac, 3);
  p.add(kCba, 1);
  const Scoreboard s(p, ScoreVector::plurality(3));
  EXPECT_EQ(s.scores(), (std::vector<Rational>{4, 3, 1}));
  EXPECT_EQ(s.order(), (std::vector<Candidate>{0, 1, 2}));
}

TEST(Scoreboard, SingleVoterBorda) {
  Profile p(3);
  p.add(kAbc, 1);
  const Scoreboard s(p, ScoreVector::borda(3));
  EXPECT_EQ(s.scores(), (std::vector<Rational>{1, make_rational(1, 2), 0}));
}

TEST(Scoreboard, AntipluralityTally) {
  Profile p(3);
  p.add(kAbc, 2);
  p.add(kCba, 1);
  const Scoreboard s(p, ScoreVector::antiplurality(3));
  EXPECT_EQ(s.scores(), (std::vector<Rational>{2, 3, 1}));
}

TEST(Scoreboard, ScoresAreAdditive) {
  const ScoreVector w = ScoreVector::borda(4);
  const Profile p = sample_ic(37, 4, 1);
  const Profile q = sample_ic(51, 4, 2);
  Scoreboard sum(p, w);
  sum += Scoreboard(q, w);
  EXPECT_EQ(sum.scores(), Scoreboard(p + q, w).scores());
}

TEST(Scoreboard, TotalScoreIsConserved) {
  for (const char* rule : {"plurality", "borda", "antiplurality", "approval:2"}) {
    const ScoreVector w = parse_rule(rule, 4);
    const Profile p = sample_ic(99, 4, 3);
    const Scoreboard s(p, w);
    Rational total = 0;
    for (const auto& x : s.scores()) total += x;
    EXPECT_EQ(total, w.mean() * 4 * 99) << rule;
    EXPECT_EQ(s.mean_score(), w.mean() * 99) << rule;
  }
}

TEST(TopTwo, StrictAndTies) {
  auto top = [](std::vector<Rational> s) { return top_two(Scoreboard(std::move(s), 8)); };
  const TopTwo clear = top({4, 3, 1});
  EXPECT_EQ(clear.a, 0);
  EXPECT_EQ(clear.b, 1);
  EXPECT_TRUE(clear.strict);
  EXPECT_FALSE(top({4, 4, 1}).strict);
  const TopTwo runner_tie = top({4, 3, 3});
  EXPECT_TRUE(runner_tie.strict);
  EXPECT_EQ(runner_tie.b, 1);
  EXPECT_TRUE(runner_tie.runner_up_tie);
}

TEST(SampleIc, CountsSumToN) {
  const Profile p = sample_ic(120, 3, 42);
  EXPECT_EQ(p.n(), 120);
  EXPECT_EQ(p.type_count(), 6u);
  const Profile one = sample_ic(1, 3, 9);
  int nonzero = 0;
  for (auto c : one.counts()) nonzero += c != 0;
  EXPECT_EQ(nonzero, 1);
}

TEST(SampleIc, Deterministic) { EXPECT_EQ(sample_ic(500, 4, 17), sample_ic(500, 4, 17)); }

TEST(SampleIc, MultinomialMoments) {
  const std::int64_t n = 720'000;
  const Profile p = sample_ic(n, 3, 2024);
  const double prob = 1.0 / 6.0;
  const double sd = std::sqrt(prob * (1 - prob) / static_cast<double>(n));
  for (auto c : p.counts()) EXPECT_LT(std::fabs(static_cast<double>(c) / n - prob), 5 * sd);
}

TEST(SampleIc, FirstPlaceTiesVanish) {
  // Tie frequency shrinks roughly like 1/sqrt(n).
  auto tie_rate = [](std::int64_t n) {
    int ties = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
      Engine e = make_engine(77, StreamTag::kProfile, static_cast<std::uint64_t>(i));
      ties += !top_two(Scoreboard(sample_ic(n, 3, e), ScoreVector::plurality(3))).strict;
    }
    return ties / static_cast<double>(trials);
  };
  const double small = tie_rate(30);
  const double large = tie_rate(3000);
  EXPECT_GT(small, 0.05);
  EXPECT_LT(large, small / 4);
}
