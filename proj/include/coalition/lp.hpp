#pragma once

// Small dense linear-program solver: two-phase primal simplex on a full
// tableau with Bland's anti-cycling rule. Instantiated for exact Rational and
// for double. All variables are implicitly non-negative.

#include <cstddef>
#include <vector>

#include "coalition/rational.hpp"

namespace coalition {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kMinimize, kMaximize };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

template <class T>
struct LinearProgram {
  struct Row {
    std::vector<T> coeffs;
    Relation relation = Relation::kLessEqual;
    T rhs{};
  };

  Sense sense = Sense::kMinimize;
  std::vector<T> objective;
  std::vector<Row> rows;

  LinearProgram() = default;
  LinearProgram(Sense s, std::vector<T> c) : sense(s), objective(std::move(c)) {}

  std::size_t variables() const { return objective.size(); }
  void add_row(std::vector<T> coeffs, Relation relation, T rhs) {
    rows.push_back(Row{std::move(coeffs), relation, std::move(rhs)});
  }
};

template <class T>
struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  T value{};
  std::vector<T> point;  // empty unless Optimal
};

/// Throws Error{kDimensionMismatch} for ragged rows and Error{kNumericalFailure}
/// when the pivot budget is exhausted or a returned point fails re-verification.
template <class T>
LpOutcome<T> solve(const LinearProgram<T>& lp);

/// The LP dual, arranged so that an optimal primal and dual share the same value.
template <class T>
LinearProgram<T> dual_program(const LinearProgram<T>& lp);

/// |primal - dual| when both are optimal; 0 for a consistent pair of
/// non-optimal statuses (infeasible/unbounded or infeasible/infeasible).
/// Throws Error{kStatusMismatch} otherwise.
template <class T>
T dual_gap_check(const LinearProgram<T>& primal, const LinearProgram<T>& dual);

/// Maximum violation of `lp`'s rows (and of x >= 0) at `x`.
template <class T>
T max_violation(const LinearProgram<T>& lp, const std::vector<T>& x);

extern template LpOutcome<Rational> solve(const LinearProgram<Rational>&);
extern template LpOutcome<double> solve(const LinearProgram<double>&);
extern template LinearProgram<Rational> dual_program(const LinearProgram<Rational>&);
extern template LinearProgram<double> dual_program(const LinearProgram<double>&);
extern template Rational dual_gap_check(const LinearProgram<Rational>&, const LinearProgram<Rational>&);
extern template double dual_gap_check(const LinearProgram<double>&, const LinearProgram<double>&);
extern template Rational max_violation(const LinearProgram<Rational>&, const std::vector<Rational>&);
extern template double max_violation(const LinearProgram<double>&, const std::vector<double>&);

}  // namespace coalition
