#include "oracles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oracle {

namespace {

using i128 = __int128;
using coalition::LinearProgram;
using coalition::LpStatus;
using coalition::Relation;
using coalition::Sense;

constexpr std::int64_t kCap = 1'000'000'000;

std::int64_t as_int(const Rational& q) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw std::invalid_argument("oracle needs small integer data");
  return q.get_num().get_si();
}

// Fraction-free determinant (Bareiss) of an n x n integer matrix.
i128 determinant(std::vector<std::vector<i128>> a) {
  const std::size_t n = a.size();
  i128 sign = 1;
  i128 prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

struct Halfspace {
  std::vector<std::int64_t> a;
  std::int64_t b;
  bool cap;
};

}  // namespace

BruteLp vertex_enumeration(const LinearProgram<Rational>& lp) {
  const std::size_t n = lp.variables();
  std::vector<Halfspace> hs;
  auto add = [&](std::vector<std::int64_t> a, std::int64_t b, bool cap) { hs.push_back({std::move(a), b, cap}); };
  for (const auto& row : lp.rows) {
    std::vector<std::int64_t> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = as_int(row.coeffs[j]);
    const std::int64_t b = as_int(row.rhs);
    std::vector<std::int64_t> neg(n);
    for (std::size_t j = 0; j < n; ++j) neg[j] = -a[j];
    if (row.relation != Relation::kGreaterEqual) add(a, b, false);
    if (row.relation != Relation::kLessEqual) add(neg, -b, false);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::int64_t> a(n, 0);
    a[j] = -1;
    add(a, 0, false);
  }
  add(std::vector<std::int64_t>(n, 1), kCap, true);

  // Minimise; a maximisation is negated.
  std::vector<std::int64_t> c(n);
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = as_int(lp.objective[j]);
    if (lp.sense == Sense::kMaximize) c[j] = -c[j];
  }

  std::optional<std::pair<i128, i128>> best_free;  // objective numerator, denominator
  std::optional<std::pair<i128, i128>> best_capped;
  auto better = [](const std::pair<i128, i128>& x, const std::optional<std::pair<i128, i128>>& y) {
    return !y || x.first * y->second < y->first * x.second;
  };

  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  const std::size_t total = hs.size();
  if (n > total) return {};
  for (;;) {
    std::vector<std::vector<i128>> m(n, std::vector<i128>(n));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t j = 0; j < n; ++j) m[r][j] = hs[pick[r]].a[j];
    }
    i128 det = determinant(m);
    if (det != 0) {
      std::vector<i128> num(n);
      for (std::size_t j = 0; j < n; ++j) {
        auto mj = m;
        for (std::size_t r = 0; r < n; ++r) mj[r][j] = hs[pick[r]].b;
        num[j] = determinant(mj);
      }
      if (det < 0) {
        det = -det;
        for (auto& v : num) v = -v;
      }
      bool feasible = true;
      bool cap_tight = false;
      for (const auto& h : hs) {
        i128 lhs = 0;
        for (std::size_t j = 0; j < n; ++j) lhs += static_cast<i128>(h.a[j]) * num[j];
        const i128 rhs = static_cast<i128>(h.b) * det;
        if (lhs > rhs) {
          feasible = false;
          break;
        }
        if (h.cap && lhs == rhs) cap_tight = true;
      }
      if (feasible) {
        i128 obj = 0;
        for (std::size_t j = 0; j < n; ++j) obj += static_cast<i128>(c[j]) * num[j];
        const std::pair<i128, i128> value{obj, det};
        auto& slot = cap_tight ? best_capped : best_free;
        if (better(value, slot)) slot = value;
      }
    }
    // Next n-subset in lexicographic order.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == total - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }

  BruteLp out;
  if (!best_free && !best_capped) return out;
  if (best_capped && better(*best_capped, best_free)) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  out.status = LpStatus::kOptimal;
  const auto& v = *best_free;
  out.value = Rational(static_cast<long>(v.first), static_cast<long>(v.second));
  out.value.canonicalize();
  if (lp.sense == Sense::kMaximize) out.value = -out.value;
  return out;
}

LinearProgram<Rational> random_small_lp(std::mt19937_64& rng, int vars, int rows) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> kind(0, 9);
  LinearProgram<Rational> lp(rng() % 2 ? Sense::kMaximize : Sense::kMinimize,
                             std::vector<Rational>(static_cast<std::size_t>(vars)));
  for (auto& c : lp.objective) c = coef(rng);
  for (int r = 0; r < rows; ++r) {
    std::vector<Rational> a(static_cast<std::size_t>(vars));
    for (auto& x : a) x = coef(rng);
    const int k = kind(rng);
    const Relation rel = k < 5 ? Relation::kLessEqual : (k < 8 ? Relation::kGreaterEqual : Relation::kEqual);
    lp.add_row(std::move(a), rel, coef(rng));
  }
  return lp;
}

namespace {

// All vectors of non-negative integers over `slots` summing to k, each entry
// bounded by caps (when given).
void compositions(std::size_t slots, std::int64_t k, const std::vector<std::int64_t>* caps,
                  const std::function<bool(const std::vector<std::int64_t>&)>& visit) {
  std::vector<std::int64_t> cur(slots, 0);
  std::function<bool(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) -> bool {
    if (i + 1 == slots) {
      if (caps && left > (*caps)[i]) return false;
      cur[i] = left;
      return visit(cur);
    }
    const std::int64_t top = caps ? std::min(left, (*caps)[i]) : left;
    for (std::int64_t v = 0; v <= top; ++v) {
      cur[i] = v;
      if (rec(i + 1, left - v)) return true;
    }
    return false;
  };
  if (slots == 0) return;
  rec(0, k);
}

}  // namespace

coalition::Extended<std::int64_t> brute_force_q1(const coalition::Profile& p, const coalition::ScoreVector& w,
                                                 coalition::Candidate beta, std::int64_t max_k, bool strict) {
  const int m = p.m();
  const auto& table = coalition::type_table(m);
  mpz_class lcm = 1;
  for (const auto& x : w.weights()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<std::int64_t> wint;
  for (const auto& x : w.weights()) wint.push_back(as_int(Rational(x * lcm)));
  auto score = [&](std::size_t t, int c) { return wint[static_cast<std::size_t>(table.rank_of(t, c))]; };

  std::vector<std::int64_t> base(static_cast<std::size_t>(m), 0);
  for (std::size_t t = 0; t < table.count; ++t) {
    for (int c = 0; c < m; ++c) base[static_cast<std::size_t>(c)] += p.count(t) * score(t, c);
  }
  const int a = static_cast<int>(std::max_element(base.begin(), base.end()) - base.begin());
  std::vector<std::size_t> pref;
  std::vector<std::int64_t> caps;
  for (std::size_t t = 0; t < table.count; ++t) {
    if (table.rank_of(t, beta) < table.rank_of(t, a) && p.count(t) > 0) {
      pref.push_back(t);
      caps.push_back(p.count(t));
    }
  }
  if (pref.empty()) return coalition::Extended<std::int64_t>::unreachable();

  for (std::int64_t k = 1; k <= max_k; ++k) {
    bool found = false;
    compositions(pref.size(), k, &caps, [&](const std::vector<std::int64_t>& x) {
      std::vector<std::int64_t> after = base;
      for (std::size_t j = 0; j < pref.size(); ++j) {
        for (int c = 0; c < m; ++c) after[static_cast<std::size_t>(c)] -= x[j] * score(pref[j], c);
      }
      compositions(table.count, k, nullptr, [&](const std::vector<std::int64_t>& y) {
        std::vector<std::int64_t> s = after;
        for (std::size_t t = 0; t < table.count; ++t) {
          if (y[t] == 0) continue;
          for (int c = 0; c < m; ++c) s[static_cast<std::size_t>(c)] += y[t] * score(t, c);
        }
        for (int c = 0; c < m; ++c) {
          if (c == beta) continue;
          const auto sb = s[static_cast<std::size_t>(beta)];
          const auto sc = s[static_cast<std::size_t>(c)];
          if (strict ? sb <= sc : sb < sc) return false;
        }
        found = true;
        return true;
      });
      return found;
    });
    if (found) return k;
  }
  return coalition::Extended<std::int64_t>::unreachable();
}

coalition::Extended<std::int64_t> brute_force_mcs(const coalition::Profile& p, const coalition::ScoreVector& w,
                                                  std::int64_t max_k, bool strict) {
  const coalition::Scoreboard board(p, w);
  const auto top = coalition::top_two(board);
  auto best = coalition::Extended<std::int64_t>::unreachable();
  for (int beta = 0; beta < p.m(); ++beta) {
    if (beta == top.a) continue;
    const auto r = brute_force_q1(p, w, beta, max_k, strict);
    if (r < best) best = r;
  }
  return best;
}

}  // namespace oracle
