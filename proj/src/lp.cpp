#include "coalition/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "coalition/error.hpp"

namespace coalition {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<Rational> {
  static bool neg(const Rational& x) { return sgn(x) < 0; }
  static bool pos(const Rational& x) { return sgn(x) > 0; }
  static bool zero(const Rational& x) { return sgn(x) == 0; }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static void tidy(Rational& x) { x.canonicalize(); }
  static bool violates(const Rational& v, const Rational&) { return sgn(v) > 0; }
};

template <>
struct Arith<double> {
  static constexpr double kEps = 1e-10;
  static bool neg(double x) { return x < -kEps; }
  static bool pos(double x) { return x > kEps; }
  static bool zero(double x) { return std::fabs(x) <= kEps; }
  static double abs(double x) { return std::fabs(x); }
  static void tidy(double& x) {
    if (std::fabs(x) <= 1e-13) x = 0.0;
  }
  // Relative feasibility tolerance for returned points.
  static bool violates(double v, double scale) { return v > 1e-8 * (1.0 + scale); }
};

// Dense simplex tableau. Row `rows_` holds reduced costs; column `cols_` holds
// the right-hand side (and -objective in the cost row).
template <class T>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_((rows + 1) * (cols + 1)), basis_(rows), active_(cols, true) {}

  T& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  const T& at(std::size_t r, std::size_t c) const { return cells_[r * (cols_ + 1) + c]; }
  T& rhs(std::size_t r) { return at(r, cols_); }
  T& cost(std::size_t c) { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  void deactivate(std::size_t c) { active_[c] = false; }

  void pivot(std::size_t r, std::size_t c) {
    const T inv = T(1) / at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) {
      at(r, j) *= inv;
      Arith<T>::tidy(at(r, j));
    }
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const T factor = at(i, c);
      if (factor == T(0)) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (at(r, j) == T(0)) continue;
        at(i, j) -= factor * at(r, j);
        Arith<T>::tidy(at(i, j));
      }
      at(i, c) = T(0);
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    // Move the last constraint row into slot r, then shift the cost row up.
    const std::size_t last = rows_ - 1;
    if (r != last) {
      for (std::size_t j = 0; j <= cols_; ++j) at(r, j) = at(last, j);
      basis_[r] = basis_[last];
    }
    for (std::size_t j = 0; j <= cols_; ++j) at(last, j) = at(rows_, j);
    cells_.resize(rows_ * (cols_ + 1));
    basis_.pop_back();
    --rows_;
  }

  enum class Step { kOptimal, kUnbounded };

  // Bland's rule: lowest-index improving column, ties in the ratio test go to
  // the lowest-index basic variable.
  Step run(std::size_t& pivots, std::size_t pivot_budget) {
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (active_[j] && Arith<T>::neg(at(rows_, j))) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Step::kOptimal;
      std::size_t leave = rows_;
      T best_ratio{};
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!Arith<T>::pos(at(i, enter))) continue;
        T ratio = at(i, cols_) / at(i, enter);
        if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows_) return Step::kUnbounded;
      if (++pivots > pivot_budget) {
        throw Error(Errc::kNumericalFailure, "simplex exceeded its pivot budget");
      }
      pivot(leave, enter);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> cells_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

template <class T>
void check_dimensions(const LinearProgram<T>& lp) {
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.rows[i].coeffs.size() != lp.variables()) {
      throw Error(Errc::kDimensionMismatch, "row " + std::to_string(i) + " has " +
                                                std::to_string(lp.rows[i].coeffs.size()) + " coefficients, expected " +
                                                std::to_string(lp.variables()));
    }
  }
}

}  // namespace

template <class T>
T max_violation(const LinearProgram<T>& lp, const std::vector<T>& x) {
  check_dimensions(lp);
  if (x.size() != lp.variables()) throw Error(Errc::kDimensionMismatch, "point has the wrong dimension");
  T worst = T(0);
  for (const auto& xi : x) worst = std::max(worst, T(-xi));
  for (const auto& row : lp.rows) {
    T lhs = T(0);
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
    T diff = lhs - row.rhs;
    switch (row.relation) {
      case Relation::kLessEqual: worst = std::max(worst, diff); break;
      case Relation::kGreaterEqual: worst = std::max(worst, T(-diff)); break;
      case Relation::kEqual: worst = std::max(worst, T(Arith<T>::abs(diff))); break;
    }
  }
  return worst;
}

template <class T>
LpOutcome<T> solve(const LinearProgram<T>& lp) {
  check_dimensions(lp);
  const std::size_t n = lp.variables();
  const std::size_t m = lp.rows.size();

  // Normalize to non-negative right-hand sides.
  struct NormRow {
    std::vector<T> coeffs;
    Relation rel;
    T rhs;
  };
  std::vector<NormRow> rows;
  rows.reserve(m);
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (const auto& row : lp.rows) {
    NormRow nr{row.coeffs, row.relation, row.rhs};
    if (nr.rhs < T(0)) {
      for (auto& c : nr.coeffs) c = -c;
      nr.rhs = -nr.rhs;
      if (nr.rel == Relation::kLessEqual) {
        nr.rel = Relation::kGreaterEqual;
      } else if (nr.rel == Relation::kGreaterEqual) {
        nr.rel = Relation::kLessEqual;
      }
    }
    if (nr.rel != Relation::kEqual) ++slacks;
    if (nr.rel != Relation::kLessEqual) ++artificials;
    rows.push_back(std::move(nr));
  }

  const std::size_t first_slack = n;
  const std::size_t first_artificial = n + slacks;
  const std::size_t cols = n + slacks + artificials;
  Tableau<T> tab(m, cols);

  std::size_t next_slack = first_slack;
  std::size_t next_artificial = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = rows[i].coeffs[j];
    tab.rhs(i) = rows[i].rhs;
    switch (rows[i].rel) {
      case Relation::kLessEqual:
        tab.at(i, next_slack) = T(1);
        tab.basis()[i] = next_slack++;
        break;
      case Relation::kGreaterEqual:
        tab.at(i, next_slack++) = T(-1);
        tab.at(i, next_artificial) = T(1);
        tab.basis()[i] = next_artificial++;
        break;
      case Relation::kEqual:
        tab.at(i, next_artificial) = T(1);
        tab.basis()[i] = next_artificial++;
        break;
    }
  }

  const std::size_t budget = 5000 + 50 * (cols + m) * (cols + m);
  std::size_t pivots = 0;

  // Phase 1: minimize the sum of artificials.
  if (artificials > 0) {
    for (std::size_t j = first_artificial; j < cols; ++j) tab.cost(j) = T(1);
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < first_artificial) continue;
      for (std::size_t j = 0; j <= cols; ++j) {
        tab.at(m, j) -= tab.at(i, j);
        Arith<T>::tidy(tab.at(m, j));
      }
    }
    tab.run(pivots, budget);
    const T phase1 = -tab.at(tab.rows(), cols);
    if (Arith<T>::pos(phase1)) return LpOutcome<T>{LpStatus::kInfeasible, T(0), {}};

    // Drive remaining artificials out of the basis; rows with no other
    // support are redundant and dropped.
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < first_artificial) {
        ++i;
        continue;
      }
      std::size_t enter = first_artificial;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (!Arith<T>::zero(tab.at(i, j))) {
          enter = j;
          break;
        }
      }
      if (enter < first_artificial) {
        tab.pivot(i, enter);
        ++i;
      } else {
        tab.drop_row(i);
      }
    }
    for (std::size_t j = first_artificial; j < cols; ++j) tab.deactivate(j);
  }

  // Phase 2 on min c.x (max is negated).
  const bool maximize = lp.sense == Sense::kMaximize;
  const std::size_t cost_row = tab.rows();
  for (std::size_t j = 0; j <= cols; ++j) tab.at(cost_row, j) = T(0);
  for (std::size_t j = 0; j < n; ++j) tab.at(cost_row, j) = maximize ? T(-lp.objective[j]) : lp.objective[j];
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    const std::size_t b = tab.basis()[i];
    if (b >= n) continue;
    const T cb = tab.at(cost_row, b);
    if (cb == T(0)) continue;
    for (std::size_t j = 0; j <= cols; ++j) {
      tab.at(cost_row, j) -= cb * tab.at(i, j);
      Arith<T>::tidy(tab.at(cost_row, j));
    }
  }
  if (tab.run(pivots, budget) == Tableau<T>::Step::kUnbounded) {
    return LpOutcome<T>{LpStatus::kUnbounded, T(0), {}};
  }

  LpOutcome<T> out;
  out.status = LpStatus::kOptimal;
  out.point.assign(n, T(0));
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    if (tab.basis()[i] < n) out.point[tab.basis()[i]] = tab.rhs(i);
  }
  out.value = T(0);
  for (std::size_t j = 0; j < n; ++j) out.value += lp.objective[j] * out.point[j];
  Arith<T>::tidy(out.value);

  T scale = T(0);
  for (const auto& row : lp.rows) scale = std::max(scale, T(Arith<T>::abs(row.rhs)));
  for (const auto& xi : out.point) scale = std::max(scale, T(Arith<T>::abs(xi)));
  if (Arith<T>::violates(max_violation(lp, out.point), scale)) {
    throw Error(Errc::kNumericalFailure, "optimal point failed row re-verification");
  }
  return out;
}

template <class T>
LinearProgram<T> dual_program(const LinearProgram<T>& lp) {
  check_dimensions(lp);
  const bool minimize = lp.sense == Sense::kMinimize;
  // Sign of each dual multiplier y_i:
  //   min primal: >= rows -> y >= 0, <= rows -> y <= 0;  max primal: the reverse.
  //   = rows -> free (split into two non-negative parts).
  struct Column {
    std::size_t row;
    int sign;
  };
  std::vector<Column> columns;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Relation rel = lp.rows[i].relation;
    if (rel == Relation::kEqual) {
      columns.push_back({i, 1});
      columns.push_back({i, -1});
    } else {
      const bool nonneg = (rel == Relation::kGreaterEqual) == minimize;
      columns.push_back({i, nonneg ? 1 : -1});
    }
  }
  LinearProgram<T> dual;
  dual.sense = minimize ? Sense::kMaximize : Sense::kMinimize;
  for (const auto& col : columns) dual.objective.push_back(lp.rows[col.row].rhs * T(col.sign));
  for (std::size_t j = 0; j < lp.variables(); ++j) {
    std::vector<T> coeffs;
    coeffs.reserve(columns.size());
    for (const auto& col : columns) coeffs.push_back(lp.rows[col.row].coeffs[j] * T(col.sign));
    dual.add_row(std::move(coeffs), minimize ? Relation::kLessEqual : Relation::kGreaterEqual, lp.objective[j]);
  }
  return dual;
}

template <class T>
T dual_gap_check(const LinearProgram<T>& primal, const LinearProgram<T>& dual) {
  const LpOutcome<T> p = solve(primal);
  const LpOutcome<T> d = solve(dual);
  if (p.status == LpStatus::kOptimal && d.status == LpStatus::kOptimal) {
    T gap = p.value - d.value;
    return Arith<T>::abs(gap);
  }
  const bool consistent = (p.status == LpStatus::kInfeasible && d.status == LpStatus::kUnbounded) ||
                          (p.status == LpStatus::kUnbounded && d.status == LpStatus::kInfeasible) ||
                          (p.status == LpStatus::kInfeasible && d.status == LpStatus::kInfeasible);
  if (!consistent) {
    throw Error(Errc::kStatusMismatch, std::string("primal is ") + to_string(p.status) + " but dual is " +
                                           to_string(d.status));
  }
  return T(0);
}

template LpOutcome<Rational> solve(const LinearProgram<Rational>&);
template LpOutcome<double> solve(const LinearProgram<double>&);
template LinearProgram<Rational> dual_program(const LinearProgram<Rational>&);
template LinearProgram<double> dual_program(const LinearProgram<double>&);
template Rational dual_gap_check(const LinearProgram<Rational>&, const LinearProgram<Rational>&);
template double dual_gap_check(const LinearProgram<double>&, const LinearProgram<double>&);
template Rational max_violation(const LinearProgram<Rational>&, const std::vector<Rational>&);
template double max_violation(const LinearProgram<double>&, const std::vector<double>&);

}  // namespace coalition
