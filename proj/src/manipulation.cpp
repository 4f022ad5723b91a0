#include "coalition/manipulation.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "coalition/error.hpp"

namespace coalition {

namespace {

std::vector<std::vector<std::size_t>> strata_of(int m, Candidate upper, Candidate lower) {
  const TypeTable& table = type_table(m);
  std::vector<std::vector<std::size_t>> strata(static_cast<std::size_t>(m - 1));
  for (std::size_t t = 0; t < table.count; ++t) {
    const int r = table.rank_of(t, upper);
    if (r + 1 < m && table.at(t, r + 1) == lower) strata[static_cast<std::size_t>(r)].push_back(t);
  }
  return strata;
}

std::vector<std::size_t> types_ranking_first(int m, Candidate c) {
  const TypeTable& table = type_table(m);
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < table.count; ++t) {
    if (table.at(t, 0) == c) out.push_back(t);
  }
  return out;
}

const Rational& weight_of(const TypeTable& table, const ScoreVector& w, std::size_t type, Candidate c) {
  return w.weight(table.rank_of(type, c));
}

mpz_class weight_denominator_lcm(const ScoreVector& w) {
  mpz_class l = 1;
  for (const auto& x : w.weights()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

std::int64_t to_i64(const Rational& q) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) {
    throw Error(Errc::kInstanceTooLarge, "scaled scores do not fit a 64-bit integer");
  }
  return q.get_num().get_si();
}

// Depth-first search for an integral coalition of exactly k recruits, with
// all quantities pre-scaled to integers by the lcm of the weight denominators.
class CoalitionSearch {
 public:
  CoalitionSearch(const ManipulationInstance& inst, const ExactOptions& options) : options_(options) {
    const int m = inst.m();
    const TypeTable& table = type_table(m);
    const ScoreVector& w = inst.rule();
    const Candidate beta = inst.target();
    const Rational scale(weight_denominator_lcm(w));
    for (Candidate c = 0; c < m; ++c) {
      if (c != beta) others_.push_back(c);
    }
    const std::size_t k_others = others_.size();

    for (std::size_t t : inst.preferring_types()) {
      recruit_types_.push_back(t);
      caps_.push_back(inst.profile().count(t));
      std::vector<std::int64_t> row;
      for (Candidate c : others_) {
        row.push_back(to_i64(scale * (weight_of(table, w, t, beta) - weight_of(table, w, t, c))));
      }
      cost_.push_back(std::move(row));
    }
    if (options.ballots == BallotSpace::kTargetFirst) {
      ballot_types_ = inst.target_first_types();
    } else {
      for (std::size_t t = 0; t < table.count; ++t) ballot_types_.push_back(t);
    }
    for (std::size_t t : ballot_types_) {
      std::vector<std::int64_t> row;
      for (Candidate c : others_) {
        row.push_back(to_i64(scale * (weight_of(table, w, t, beta) - weight_of(table, w, t, c))));
      }
      gain_.push_back(std::move(row));
    }
    for (Candidate c : others_) {
      base_.push_back(to_i64(scale * (inst.scoreboard().score(c) - inst.scoreboard().score(beta))));
    }

    // Suffix extrema drive the pruning bounds.
    const std::size_t nr = recruit_types_.size();
    min_cost_suffix_.assign(nr + 1, std::vector<std::int64_t>(k_others, std::numeric_limits<std::int64_t>::max()));
    for (std::size_t j = nr; j-- > 0;) {
      for (std::size_t a = 0; a < k_others; ++a) {
        min_cost_suffix_[j][a] = std::min(min_cost_suffix_[j + 1][a], cost_[j][a]);
      }
    }
    const std::size_t nb = ballot_types_.size();
    max_gain_suffix_.assign(nb + 1, std::vector<std::int64_t>(k_others, std::numeric_limits<std::int64_t>::min()));
    for (std::size_t j = nb; j-- > 0;) {
      for (std::size_t a = 0; a < k_others; ++a) {
        max_gain_suffix_[j][a] = std::max(max_gain_suffix_[j + 1][a], gain_[j][a]);
      }
    }
    x_.assign(nr, 0);
    y_.assign(nb, 0);
  }

  std::int64_t recruitable() const {
    std::int64_t total = 0;
    for (auto c : caps_) total += c;
    return total;
  }

  bool search(std::int64_t k) {
    k_ = k;
    deficit_ = base_;
    if (recruit_types_.empty() || ballot_types_.empty()) return false;
    return assign_recruits(0, k);
  }

  std::uint64_t nodes() const { return nodes_; }

  CoalitionPlan plan(std::size_t types) const {
    CoalitionPlan p(types);
    for (std::size_t j = 0; j < recruit_types_.size(); ++j) p.x[recruit_types_[j]] = x_[j];
    for (std::size_t j = 0; j < ballot_types_.size(); ++j) p.y[ballot_types_[j]] = y_[j];
    return p;
  }

 private:
  void tick() {
    if (++nodes_ > options_.node_budget) {
      throw Error(Errc::kInstanceTooLarge, "exact search exceeded " + std::to_string(options_.node_budget) + " nodes");
    }
  }

  bool short_of(std::int64_t achieved, std::int64_t needed) const {
    return options_.success == SuccessRule::kStrictWin ? achieved <= needed : achieved < needed;
  }

  bool assign_recruits(std::size_t j, std::int64_t remaining) {
    tick();
    const std::size_t k_others = others_.size();
    // Even the cheapest completion must leave deficits the ballots can cover.
    for (std::size_t a = 0; a < k_others; ++a) {
      const std::int64_t least = deficit_[a] + remaining * min_cost_suffix_[j][a];
      if (short_of(k_ * max_gain_suffix_[0][a], least)) return false;
    }
    const std::size_t last = recruit_types_.size() - 1;
    if (j == last) {
      if (remaining > caps_[j]) return false;
      x_[j] = remaining;
      for (std::size_t a = 0; a < k_others; ++a) deficit_[a] += remaining * cost_[j][a];
      gained_.assign(k_others, 0);
      const bool ok = assign_ballots(0, k_);
      for (std::size_t a = 0; a < k_others; ++a) deficit_[a] -= remaining * cost_[j][a];
      if (!ok) x_[j] = 0;
      return ok;
    }
    const std::int64_t top = std::min(remaining, caps_[j]);
    for (std::int64_t v = 0; v <= top; ++v) {
      x_[j] = v;
      for (std::size_t a = 0; a < k_others; ++a) deficit_[a] += v * cost_[j][a];
      const bool ok = assign_recruits(j + 1, remaining - v);
      for (std::size_t a = 0; a < k_others; ++a) deficit_[a] -= v * cost_[j][a];
      if (ok) return true;
    }
    x_[j] = 0;
    return false;
  }

  bool assign_ballots(std::size_t j, std::int64_t remaining) {
    tick();
    const std::size_t k_others = others_.size();
    for (std::size_t a = 0; a < k_others; ++a) {
      if (short_of(gained_[a] + remaining * max_gain_suffix_[j][a], deficit_[a])) return false;
    }
    const std::size_t last = ballot_types_.size() - 1;
    if (j == last) {
      for (std::size_t a = 0; a < k_others; ++a) {
        if (short_of(gained_[a] + remaining * gain_[j][a], deficit_[a])) return false;
      }
      y_[j] = remaining;
      return true;
    }
    for (std::int64_t v = remaining; v >= 0; --v) {
      y_[j] = v;
      for (std::size_t a = 0; a < k_others; ++a) gained_[a] += v * gain_[j][a];
      const bool ok = assign_ballots(j + 1, remaining - v);
      for (std::size_t a = 0; a < k_others; ++a) gained_[a] -= v * gain_[j][a];
      if (ok) return true;
    }
    y_[j] = 0;
    return false;
  }

  ExactOptions options_;
  std::vector<Candidate> others_;
  std::vector<std::size_t> recruit_types_;
  std::vector<std::int64_t> caps_;
  std::vector<std::vector<std::int64_t>> cost_;
  std::vector<std::size_t> ballot_types_;
  std::vector<std::vector<std::int64_t>> gain_;
  std::vector<std::int64_t> base_;
  std::vector<std::vector<std::int64_t>> min_cost_suffix_;
  std::vector<std::vector<std::int64_t>> max_gain_suffix_;

  std::int64_t k_ = 0;
  std::vector<std::int64_t> deficit_;
  std::vector<std::int64_t> gained_;
  std::vector<std::int64_t> x_;
  std::vector<std::int64_t> y_;
  std::uint64_t nodes_ = 0;
};

// Relaxation LP over recruits `recruit` and ballots `ballots` for target beta:
//   min sum x
//   sum_s y_s (w(s,beta) - w(s,alpha)) - sum_t x_t (w(t,beta) - w(t,alpha)) >= |alpha| - |beta|
//   sum y = sum x,  x_t <= bound_t (when given)
LinearProgram<Rational> coalition_lp(const Scoreboard& s, const ScoreVector& w, Candidate beta,
                                     const std::vector<std::size_t>& recruit, const std::vector<std::size_t>& ballots,
                                     const std::vector<std::optional<Rational>>& bounds) {
  const int m = s.m();
  const TypeTable& table = type_table(m);
  const std::size_t nx = recruit.size();
  const std::size_t ny = ballots.size();
  std::vector<Rational> objective(nx + ny, 0);
  for (std::size_t j = 0; j < nx; ++j) objective[j] = 1;
  LinearProgram<Rational> lp(Sense::kMinimize, objective);
  for (Candidate alpha = 0; alpha < m; ++alpha) {
    if (alpha == beta) continue;
    std::vector<Rational> row(nx + ny);
    for (std::size_t j = 0; j < nx; ++j) {
      row[j] = -(weight_of(table, w, recruit[j], beta) - weight_of(table, w, recruit[j], alpha));
    }
    for (std::size_t j = 0; j < ny; ++j) {
      row[nx + j] = weight_of(table, w, ballots[j], beta) - weight_of(table, w, ballots[j], alpha);
    }
    lp.add_row(std::move(row), Relation::kGreaterEqual, s.score(alpha) - s.score(beta));
  }
  std::vector<Rational> balance(nx + ny);
  for (std::size_t j = 0; j < nx; ++j) balance[j] = -1;
  for (std::size_t j = 0; j < ny; ++j) balance[nx + j] = 1;
  lp.add_row(std::move(balance), Relation::kEqual, 0);
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    if (!bounds[j]) continue;
    std::vector<Rational> row(nx + ny, 0);
    row[j] = 1;
    lp.add_row(std::move(row), Relation::kLessEqual, *bounds[j]);
  }
  return lp;
}

ExtRational lp_value(const LinearProgram<Rational>& lp) {
  const LpOutcome<Rational> out = solve(lp);
  switch (out.status) {
    case LpStatus::kOptimal: return out.value;
    case LpStatus::kInfeasible: return ExtRational::unreachable();
    case LpStatus::kUnbounded: break;
  }
  // The objective is a sum of non-negative variables.
  throw Error(Errc::kNumericalFailure, "coalition LP reported unbounded");
}

std::int64_t ceil_to_i64(const Rational& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c.get_si();
}

ExactResult q1_capped(const ManipulationInstance& inst, const ExactOptions& options, std::int64_t cap) {
  if (inst.m() > 4) throw Error(Errc::kInstanceTooLarge, "exact search is limited to m <= 4");
  ExactResult result;
  result.size = Extended<std::int64_t>::unreachable();

  // LP relaxation (integrality dropped) gives the starting depth.
  std::vector<std::size_t> ballots;
  if (options.ballots == BallotSpace::kTargetFirst) {
    ballots = inst.target_first_types();
  } else {
    for (std::size_t t = 0; t < inst.profile().type_count(); ++t) ballots.push_back(t);
  }
  std::vector<std::optional<Rational>> bounds;
  for (std::size_t t : inst.preferring_types()) bounds.emplace_back(Rational(inst.profile().count(t)));
  const ExtRational relaxed = lp_value(
      coalition_lp(inst.scoreboard(), inst.rule(), inst.target(), inst.preferring_types(), ballots, bounds));
  if (relaxed.is_unreachable()) return result;

  CoalitionSearch search(inst, options);
  const std::int64_t k_max = std::min(cap, search.recruitable());
  for (std::int64_t k = std::max<std::int64_t>(1, ceil_to_i64(relaxed.value())); k <= k_max; ++k) {
    if (search.search(k)) {
      result.size = k;
      result.plan = search.plan(inst.profile().type_count());
      break;
    }
  }
  result.nodes = search.nodes();
  return result;
}

}  // namespace

ManipulationInstance::ManipulationInstance(Profile profile, ScoreVector rule, Candidate target)
    : profile_(std::move(profile)), rule_(std::move(rule)), scoreboard_(profile_, rule_), target_(target) {
  const TopTwo top = top_two(scoreboard_);
  if (!top.strict) throw Error(Errc::kNotStrictWinner, "profile has a tie for first place");
  winner_ = top.a;
  runner_up_ = top.b;
  if (target_ < 0 || target_ >= m() || target_ == winner_) {
    throw Error(Errc::kParamOutOfRange, "manipulation target must be a candidate other than the winner");
  }
  const TypeTable& table = type_table(m());
  strata_ = strata_of(m(), target_, winner_);
  std::vector<bool> in_strata(table.count, false);
  for (const auto& stratum : strata_) {
    for (std::size_t t : stratum) {
      preferring_.push_back(t);
      in_strata[t] = true;
    }
  }
  for (std::size_t t = 0; t < table.count; ++t) {
    if (!in_strata[t] && table.rank_of(t, target_) < table.rank_of(t, winner_)) preferring_.push_back(t);
  }
  target_first_ = types_ranking_first(m(), target_);
}

std::vector<std::size_t> ManipulationInstance::adjacent_types() const {
  std::vector<std::size_t> out;
  for (const auto& stratum : strata_) out.insert(out.end(), stratum.begin(), stratum.end());
  return out;
}

Rational CoalitionPlan::size() const {
  Rational total = 0;
  for (const auto& v : x) total += v;
  return total;
}

Rational CoalitionPlan::ballots() const {
  Rational total = 0;
  for (const auto& v : y) total += v;
  return total;
}

ExactResult q1(const ManipulationInstance& inst, const ExactOptions& options) {
  return q1_capped(inst, options, std::numeric_limits<std::int64_t>::max());
}

McsResult mcs_exact(const Profile& profile, const ScoreVector& rule, const ExactOptions& options) {
  const Scoreboard board(profile, rule);
  const TopTwo top = top_two(board);
  if (!top.strict) throw Error(Errc::kNotStrictWinner, "profile has a tie for first place");
  McsResult best;
  best.size = Extended<std::int64_t>::unreachable();
  for (Candidate beta = 0; beta < profile.m(); ++beta) {
    if (beta == top.a) continue;
    const ManipulationInstance inst(profile, rule, beta);
    // Only a strictly smaller coalition can improve on the incumbent.
    const std::int64_t cap =
        best.size.is_finite() ? best.size.value() - 1 : std::numeric_limits<std::int64_t>::max();
    ExactResult r = q1_capped(inst, options, cap);
    if (r.size < best.size) {
      best.size = r.size;
      best.target = beta;
      best.plan = std::move(r.plan);
    }
  }
  return best;
}

LinearProgram<Rational> relaxation_lp(const ManipulationInstance& inst, const std::optional<Rational>& upper_offset) {
  std::vector<std::optional<Rational>> bounds;
  if (upper_offset) {
    for (std::size_t t : inst.preferring_types()) bounds.emplace_back(Rational(inst.profile().count(t)) - *upper_offset);
  }
  return coalition_lp(inst.scoreboard(), inst.rule(), inst.target(), inst.preferring_types(),
                      inst.target_first_types(), bounds);
}

ExtRational q2(const ManipulationInstance& inst, const Rational& k) { return lp_value(relaxation_lp(inst, k)); }

ExtRational q3(const ManipulationInstance& inst) { return lp_value(relaxation_lp(inst, std::nullopt)); }

AdjacentLayout adjacent_layout(const Scoreboard& s) {
  const TopTwo top = top_two(s);
  if (!top.strict) throw Error(Errc::kNotStrictWinner, "scoreboard has a tie for first place");
  AdjacentLayout layout;
  layout.a = top.a;
  layout.b = top.b;
  for (const auto& stratum : strata_of(s.m(), top.b, top.a)) {
    layout.adjacent.insert(layout.adjacent.end(), stratum.begin(), stratum.end());
  }
  layout.b_first = types_ranking_first(s.m(), top.b);
  return layout;
}

LinearProgram<Rational> adjacent_program_lp(const Scoreboard& s, const ScoreVector& w) {
  if (s.m() != w.m()) throw Error(Errc::kDimensionMismatch, "scoreboard and rule disagree on m");
  const AdjacentLayout layout = adjacent_layout(s);
  return coalition_lp(s, w, layout.b, layout.adjacent, layout.b_first, {});
}

ExtRational q_adjacent(const Scoreboard& s, const ScoreVector& w) { return lp_value(adjacent_program_lp(s, w)); }

ExtRational q_adjacent(const Profile& profile, const ScoreVector& w) { return q_adjacent(Scoreboard(profile, w), w); }

Rational adjacent_program_violation(const Scoreboard& s, const ScoreVector& w, const CoalitionPlan& plan) {
  const AdjacentLayout layout = adjacent_layout(s);
  const std::size_t types = type_table(s.m()).count;
  if (plan.x.size() != types || plan.y.size() != types) {
    throw Error(Errc::kDimensionMismatch, "plan is not dense over the m! voter types");
  }
  Rational worst = 0;
  std::vector<bool> is_adjacent(types, false);
  std::vector<bool> is_b_first(types, false);
  for (std::size_t t : layout.adjacent) is_adjacent[t] = true;
  for (std::size_t t : layout.b_first) is_b_first[t] = true;
  for (std::size_t t = 0; t < types; ++t) {
    if (!is_adjacent[t]) worst = std::max(worst, Rational(abs(plan.x[t])));
    if (!is_b_first[t]) worst = std::max(worst, Rational(abs(plan.y[t])));
  }
  std::vector<Rational> point;
  for (std::size_t t : layout.adjacent) point.push_back(plan.x[t]);
  for (std::size_t t : layout.b_first) point.push_back(plan.y[t]);
  const LinearProgram<Rational> lp = coalition_lp(s, w, layout.b, layout.adjacent, layout.b_first, {});
  return std::max(worst, max_violation(lp, point));
}

}  // namespace coalition
