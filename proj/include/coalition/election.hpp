#pragma once

// Candidates, voter types, positional scoring rules, profiles and scoreboards,
// plus Impartial Culture sampling.
//
// Candidates are 0..m-1. A voter type is a strict ranking of all candidates;
// types are indexed by the lexicographic rank of the permutation, so a profile
// is a dense array of m! counts.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coalition/rational.hpp"
#include "coalition/rng.hpp"

namespace coalition {

using Candidate = int;

inline constexpr int kMinCandidates = 3;
inline constexpr int kMaxCandidates = 8;

/// Normalized positional score vector: w_1 = 1 >= w_2 >= ... >= w_m = 0.
class ScoreVector {
 public:
  /// Maps a non-increasing, non-constant vector onto [0,1] by x -> (x - w_m)/(w_1 - w_m).
  static ScoreVector normalize(std::span<const Rational> raw);

  static ScoreVector borda(int m);
  static ScoreVector plurality(int m);
  static ScoreVector antiplurality(int m);
  static ScoreVector approval(int m, int k);

  int m() const { return static_cast<int>(weights_.size()); }

  /// Weight of rank `rank`, 0-based (rank 0 is first place).
  const Rational& weight(int rank) const { return weights_[static_cast<std::size_t>(rank)]; }
  const std::vector<Rational>& weights() const { return weights_; }
  double weight_d(int rank) const { return weights_d_[static_cast<std::size_t>(rank)]; }

  const Rational& mean() const { return mean_; }
  /// Population variance (sum w_i^2)/m - mean^2.
  const Rational& variance() const { return variance_; }
  double sigma() const;

  /// True for w = (1,...,1,0); the only rule with an unbounded dual polytope.
  bool is_antiplurality() const { return weights_[weights_.size() - 2] == 1; }

  bool operator==(const ScoreVector& other) const { return weights_ == other.weights_; }

 private:
  explicit ScoreVector(std::vector<Rational> weights);

  std::vector<Rational> weights_;
  std::vector<double> weights_d_;
  Rational mean_;
  Rational variance_;
};

/// Parses `borda | plurality | antiplurality | approval:<k> | weights:<w1,...,wm>`.
/// Named rules need `m`; for `weights:` a positive `m` must agree with the length.
ScoreVector parse_rule(std::string_view text, int m);

/// Short display string that round-trips through parse_rule for the same m.
std::string rule_string(const ScoreVector& w);

/// Lookup tables of all m! rankings for a given m (built once, shared).
struct TypeTable {
  int m = 0;
  std::size_t count = 0;
  std::vector<int> rankings;   // count x m, row t = candidates in rank order
  std::vector<int> positions;  // count x m, row t = rank of each candidate

  int at(std::size_t type, int rank) const { return rankings[type * static_cast<std::size_t>(m) + static_cast<std::size_t>(rank)]; }
  int rank_of(std::size_t type, Candidate c) const { return positions[type * static_cast<std::size_t>(m) + static_cast<std::size_t>(c)]; }
};

const TypeTable& type_table(int m);

std::size_t factorial(int k);

/// One voter type: ranking[i] is the candidate placed i-th.
class VoterType {
 public:
  explicit VoterType(std::vector<Candidate> ranking);
  static VoterType from_index(int m, std::size_t index);

  int m() const { return static_cast<int>(ranking_.size()); }
  const std::vector<Candidate>& ranking() const { return ranking_; }
  Candidate at(int rank) const { return ranking_[static_cast<std::size_t>(rank)]; }
  int rank_of(Candidate c) const;
  /// Lexicographic rank among the m! permutations.
  std::size_t index() const;

  bool operator==(const VoterType&) const = default;

 private:
  std::vector<Candidate> ranking_;
};

/// Score contributed to `alpha` by a ballot of type `t`.
const Rational& sigma(const VoterType& t, Candidate alpha, const ScoreVector& w);

class Profile {
 public:
  explicit Profile(int m);
  Profile(int m, std::vector<std::int64_t> counts);

  int m() const { return m_; }
  std::int64_t n() const;
  std::size_t type_count() const { return counts_.size(); }
  std::int64_t count(std::size_t type) const { return counts_[type]; }
  std::int64_t count(const VoterType& t) const { return counts_[t.index()]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  void add(const VoterType& t, std::int64_t votes);
  void add(std::size_t type, std::int64_t votes);

  Profile& operator+=(const Profile& other);
  friend Profile operator+(Profile lhs, const Profile& rhs) { return lhs += rhs; }
  bool operator==(const Profile&) const = default;

 private:
  int m_;
  std::vector<std::int64_t> counts_;
};

class Scoreboard {
 public:
  Scoreboard(const Profile& p, const ScoreVector& w);
  /// Raw scoreboard; `n` is informational, the mean score is sum/m.
  Scoreboard(std::vector<Rational> scores, std::int64_t n);

  int m() const { return static_cast<int>(scores_.size()); }
  std::int64_t n() const { return n_; }
  const Rational& score(Candidate c) const { return scores_[static_cast<std::size_t>(c)]; }
  const std::vector<Rational>& scores() const { return scores_; }
  /// Candidates by descending score; equal scores keep the lower index first.
  const std::vector<Candidate>& order() const { return order_; }
  /// n * mean(w), computed as the average candidate score.
  const Rational& mean_score() const { return mean_score_; }

  Scoreboard& operator+=(const Scoreboard& other);

 private:
  void rebuild();

  std::vector<Rational> scores_;
  std::int64_t n_;
  std::vector<Candidate> order_;
  Rational mean_score_;
};

struct TopTwo {
  Candidate a = 0;
  Candidate b = 1;
  bool strict = false;       // |a| > |alpha| for every alpha != a
  bool runner_up_tie = false;
};

TopTwo top_two(const Scoreboard& s);

/// Multinomial IC profile, deterministic for a fixed seed.
Profile sample_ic(std::int64_t n, int m, std::uint64_t seed);
Profile sample_ic(std::int64_t n, int m, Engine& engine);

}  // namespace coalition
