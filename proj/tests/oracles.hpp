#pragma once

// Independent reference implementations used by the tests. Nothing here calls
// the simplex solver or the coalition search.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "coalition/election.hpp"
#include "coalition/extended.hpp"
#include "coalition/lp.hpp"
#include "coalition/manipulation.hpp"

namespace oracle {

using coalition::Rational;

struct BruteLp {
  coalition::LpStatus status = coalition::LpStatus::kInfeasible;
  Rational value;
};

/// Vertex enumeration for an LP with integer data and x >= 0. A single cap
/// sum(x) <= kCap makes the region bounded; an optimum that needs the cap to
/// be tight and beats every uncapped vertex means the LP is unbounded.
BruteLp vertex_enumeration(const coalition::LinearProgram<Rational>& lp);

/// Random LP with `vars` variables, `rows` rows, coefficients and rhs in [-3,3].
coalition::LinearProgram<Rational> random_small_lp(std::mt19937_64& rng, int vars, int rows);

/// Smallest coalition for target beta by exhaustive enumeration of recruits and
/// of insincere ballots over every voter type (not just beta-first ones).
coalition::Extended<std::int64_t> brute_force_q1(const coalition::Profile& p, const coalition::ScoreVector& w,
                                                 coalition::Candidate beta, std::int64_t max_k,
                                                 bool strict = false);
coalition::Extended<std::int64_t> brute_force_mcs(const coalition::Profile& p, const coalition::ScoreVector& w,
                                                  std::int64_t max_k, bool strict = false);

}  // namespace oracle
