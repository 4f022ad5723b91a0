#pragma once

// Reduced forms of the coalition problem: the stratified LP over z_1..z_{m-1},
// its two-variable dual over the polytope M_w, closed forms for named rule
// families, and the explicit construction of a coalition from a z-vector.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "coalition/election.hpp"
#include "coalition/extended.hpp"
#include "coalition/lp.hpp"
#include "coalition/manipulation.hpp"

namespace coalition {

/// a_margin = |a| - n*wbar, b_deficit = n*wbar - |b|.
struct MarginPair {
  Rational a_margin;
  Rational b_deficit;
  /// True when the pair can arise from an m-candidate scoreboard with a clear
  /// winner: a_margin >= 0 and -a_margin < b_deficit <= a_margin/(m-1).
  bool scoreboard_valid = false;
};

MarginPair make_margins(Rational a_margin, Rational b_deficit, int m);
/// Margins of the winner and runner-up. Throws Error{kNotStrictWinner}.
MarginPair margins_of(const Scoreboard& s);

/// z_i = mass recruited from stratum i (index 0 holds z_1).
using ZVector = std::vector<Rational>;

struct Point2 {
  Rational lambda;
  Rational mu;
  bool operator==(const Point2&) const = default;
};

/// Half-plane a*lambda + b*mu <= c.
struct HalfPlane {
  Rational a;
  Rational b;
  Rational c;
};

struct Polytope2D {
  int m = 0;
  std::vector<Point2> vertices;  // counterclockwise from (0,0)
  std::vector<Point2> rays;      // recession directions, empty unless anti-plurality
  std::vector<HalfPlane> rows;

  bool contains(const Point2& p) const;
};

Polytope2D mw_polytope(const ScoreVector& w);

/// Indices of vertices that attain the maximum of a_margin*lambda + b_deficit*mu
/// for some scoreboard-valid margin pair.
std::vector<std::size_t> possibly_optimal_vertices(const Polytope2D& poly);

struct DualOptimum {
  ExtRational value;
  std::vector<std::size_t> argmax;  // optimal vertex indices, empty when unreachable
};

DualOptimum q_dual(const MarginPair& margins, const Polytope2D& poly);

/// min sum z  s.t.  sum (1 - w_i + w_{i+1}) z_i >= A + B,  sum (1 - w_i) z_i >= B.
LinearProgram<Rational> stratified_lp(const MarginPair& margins, const ScoreVector& w);
/// max A*lambda + B*mu over M_w.
LinearProgram<Rational> dual_lp(const MarginPair& margins, const ScoreVector& w);

struct StratifiedSolution {
  ExtRational value;
  std::optional<ZVector> z;
};

StratifiedSolution q_stratified(const MarginPair& margins, const ScoreVector& w);

enum class RuleFamily { kBorda, kApproval, kAntiplurality, kEasy, kHard };

/// `k` is used by kApproval; `p` by the three-candidate families w = (1, 1-p, 0).
struct FamilySpec {
  RuleFamily family = RuleFamily::kBorda;
  int m = 3;
  int k = 0;
  Rational p;
};

/// Accepts borda, approval (k-approval), antiplurality, easy, hard.
/// Throws Error{kUnknownFamily}.
FamilySpec family_from_name(std::string_view name, int m, const Rational& param = 0);
std::optional<FamilySpec> detect_family(const ScoreVector& w);
ScoreVector family_rule(const FamilySpec& spec);

/// Throws Error{kParamOutOfRange} for parameters outside the family's range.
ExtRational closed_form_q(const FamilySpec& spec, const MarginPair& margins);
/// Throws Error{kUnknownFamily} when `w` is not one of the named families.
ExtRational closed_form_q(const ScoreVector& w, const MarginPair& margins);

/// 2 m! / (1 - w_{m-1}), or 0 for anti-plurality.
Rational k_constant(const ScoreVector& w);

/// A scoreboard realising the margins with a = candidate 0 and b = candidate 1;
/// the remaining candidates share the leftover score equally. Requires
/// a_margin + b_deficit > 0 and a_margin >= (m-1) b_deficit.
Scoreboard synthetic_scoreboard(const MarginPair& margins, int m, const Rational& mean_score = 0);

/// Coalition for the adjacent program built from z. Throws Error{kZInfeasible}
/// when z violates the two stratified rows and Error{kConstructionFailed} if the
/// result fails re-verification.
CoalitionPlan witness_from_z(const Scoreboard& s, const ScoreVector& w, const ZVector& z);
/// Same, for an instance whose target is the runner-up.
CoalitionPlan witness_from_z(const ManipulationInstance& inst, const ZVector& z);

}  // namespace coalition
