#pragma once

// Exact minimum manipulating coalition size and its LP relaxations.
//
// A coalition manipulates in favour of a target `beta` against the sincere
// winner `a`: every member prefers beta to a, members withdraw their sincere
// ballots and cast insincere ones, and the attempt succeeds when beta's score
// matches or exceeds every other candidate's score.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "coalition/election.hpp"
#include "coalition/extended.hpp"
#include "coalition/lp.hpp"

namespace coalition {

enum class SuccessRule {
  kTieSuffices,  // beta >= every other candidate (the standard definition)
  kStrictWin,    // beta > every other candidate
};

enum class BallotSpace {
  kTargetFirst,  // insincere ballots rank the target first
  kAllTypes,     // any ballot (validation mode for the restriction above)
};

class ManipulationInstance {
 public:
  /// Throws Error{kNotStrictWinner} if the profile has no clear winner and
  /// Error{kParamOutOfRange} if `target` is the winner.
  ManipulationInstance(Profile profile, ScoreVector rule, Candidate target);

  const Profile& profile() const { return profile_; }
  const ScoreVector& rule() const { return rule_; }
  const Scoreboard& scoreboard() const { return scoreboard_; }
  int m() const { return profile_.m(); }

  Candidate winner() const { return winner_; }
  Candidate runner_up() const { return runner_up_; }
  Candidate target() const { return target_; }

  /// Types ranking the target above the winner, strata first (in stratum
  /// order) then the rest lexicographically.
  const std::vector<std::size_t>& preferring_types() const { return preferring_; }
  /// Types ranking the target first.
  const std::vector<std::size_t>& target_first_types() const { return target_first_; }
  /// Stratum i (1-based, i = 1..m-1): target in place i, winner in place i+1.
  const std::vector<std::size_t>& stratum(int i) const { return strata_[static_cast<std::size_t>(i - 1)]; }
  /// Union of all strata.
  std::vector<std::size_t> adjacent_types() const;

 private:
  Profile profile_;
  ScoreVector rule_;
  Scoreboard scoreboard_;
  Candidate winner_;
  Candidate runner_up_;
  Candidate target_;
  std::vector<std::size_t> preferring_;
  std::vector<std::size_t> target_first_;
  std::vector<std::vector<std::size_t>> strata_;
};

/// Recruited sincere types (x) and insincere ballots cast (y), dense over the
/// m! voter types.
struct CoalitionPlan {
  std::vector<Rational> x;
  std::vector<Rational> y;

  explicit CoalitionPlan(std::size_t types = 0) : x(types, 0), y(types, 0) {}
  Rational size() const;
  Rational ballots() const;
};

struct ExactOptions {
  SuccessRule success = SuccessRule::kTieSuffices;
  BallotSpace ballots = BallotSpace::kTargetFirst;
  std::uint64_t node_budget = 10'000'000;
};

struct ExactResult {
  Extended<std::int64_t> size;
  std::optional<CoalitionPlan> plan;
  std::uint64_t nodes = 0;
};

/// Smallest integral coalition (x_t <= N_t) for the instance's target.
/// Throws Error{kInstanceTooLarge} for m > 4 or when the search exceeds the
/// node budget.
ExactResult q1(const ManipulationInstance& inst, const ExactOptions& options = {});

struct McsResult {
  Extended<std::int64_t> size;
  std::optional<Candidate> target;
  std::optional<CoalitionPlan> plan;
};

/// Minimum over all targets of q1. Throws Error{kNotStrictWinner}.
McsResult mcs_exact(const Profile& profile, const ScoreVector& rule, const ExactOptions& options = {});

/// LP relaxation of the integer program with x_t <= N_t - K.
ExtRational q2(const ManipulationInstance& inst, const Rational& k);
/// LP relaxation of the integer program without the x_t upper bounds.
ExtRational q3(const ManipulationInstance& inst);

/// The LP whose optimum defines q2 (when `upper_offset` is set) or q3.
LinearProgram<Rational> relaxation_lp(const ManipulationInstance& inst, const std::optional<Rational>& upper_offset);

/// The adjacent-recruitment program: target fixed to the runner-up b, recruits
/// drawn only from types ranking b immediately above the winner a, ballots rank
/// b first. LP variables are x over `adjacent` then y over `b_first`.
struct AdjacentLayout {
  Candidate a = 0;
  Candidate b = 1;
  std::vector<std::size_t> adjacent;  // T_ba, stratum by stratum
  std::vector<std::size_t> b_first;   // T_b
};

AdjacentLayout adjacent_layout(const Scoreboard& s);
LinearProgram<Rational> adjacent_program_lp(const Scoreboard& s, const ScoreVector& w);
ExtRational q_adjacent(const Scoreboard& s, const ScoreVector& w);
ExtRational q_adjacent(const Profile& profile, const ScoreVector& w);

/// Largest violation of any adjacent-program constraint by `plan` (0 if feasible).
/// Entries of x outside T_ba or of y outside T_b count as violations.
Rational adjacent_program_violation(const Scoreboard& s, const ScoreVector& w, const CoalitionPlan& plan);

}  // namespace coalition
