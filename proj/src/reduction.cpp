#include "coalition/reduction.hpp"

#include <algorithm>
#include <string>

#include "coalition/error.hpp"

namespace coalition {

MarginPair make_margins(Rational a_margin, Rational b_deficit, int m) {
  MarginPair out{std::move(a_margin), std::move(b_deficit), false};
  out.scoreboard_valid =
      sgn(out.a_margin) >= 0 && out.b_deficit > -out.a_margin && out.b_deficit * (m - 1) <= out.a_margin;
  return out;
}

MarginPair margins_of(const Scoreboard& s) {
  const TopTwo top = top_two(s);
  if (!top.strict) throw Error(Errc::kNotStrictWinner, "scoreboard has a tie for first place");
  return make_margins(s.score(top.a) - s.mean_score(), s.mean_score() - s.score(top.b), s.m());
}

bool Polytope2D::contains(const Point2& p) const {
  return std::all_of(rows.begin(), rows.end(), [&](const HalfPlane& h) { return h.a * p.lambda + h.b * p.mu <= h.c; });
}

Polytope2D mw_polytope(const ScoreVector& w) {
  Polytope2D poly;
  poly.m = w.m();
  for (int i = 0; i + 1 < w.m(); ++i) poly.rows.push_back({w.weight(i + 1), 1 - w.weight(i), 1});
  poly.rows.push_back({-1, 0, 0});  // lambda >= 0
  poly.rows.push_back({1, -1, 0});  // lambda <= mu

  for (std::size_t i = 0; i < poly.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < poly.rows.size(); ++j) {
      const HalfPlane& p = poly.rows[i];
      const HalfPlane& q = poly.rows[j];
      const Rational det = p.a * q.b - p.b * q.a;
      if (sgn(det) == 0) continue;
      Point2 v{(p.c * q.b - p.b * q.c) / det, (p.a * q.c - p.c * q.a) / det};
      if (!poly.contains(v)) continue;
      if (std::find(poly.vertices.begin(), poly.vertices.end(), v) == poly.vertices.end()) {
        poly.vertices.push_back(std::move(v));
      }
    }
  }
  if (poly.vertices.size() > static_cast<std::size_t>(w.m()) + 1) {
    throw Error(Errc::kNumericalFailure, "vertex enumeration found more than m+1 vertices");
  }

  // Recession cone: each row holds homogeneously. Its extreme rays lie on the
  // boundary lines of those homogeneous constraints.
  auto in_cone = [&](const Point2& d) {
    return std::all_of(poly.rows.begin(), poly.rows.end(),
                       [&](const HalfPlane& h) { return sgn(h.a * d.lambda + h.b * d.mu) <= 0; });
  };
  for (const HalfPlane& h : poly.rows) {
    if (sgn(h.a) == 0 && sgn(h.b) == 0) continue;
    for (int sign : {1, -1}) {
      Point2 d{-h.b * sign, h.a * sign};
      const Rational len = std::max(abs(d.lambda), abs(d.mu));
      d.lambda /= len;
      d.mu /= len;
      if (!in_cone(d)) continue;
      if (std::find(poly.rays.begin(), poly.rays.end(), d) == poly.rays.end()) poly.rays.push_back(std::move(d));
    }
  }

  // Counterclockwise from the lowest (then leftmost) vertex, which is (0,0).
  auto lowest = std::min_element(poly.vertices.begin(), poly.vertices.end(), [](const Point2& x, const Point2& y) {
    return x.mu < y.mu || (x.mu == y.mu && x.lambda < y.lambda);
  });
  std::iter_swap(poly.vertices.begin(), lowest);
  const Point2 origin = poly.vertices.front();
  std::sort(poly.vertices.begin() + 1, poly.vertices.end(), [&](const Point2& x, const Point2& y) {
    const Rational cross =
        (x.lambda - origin.lambda) * (y.mu - origin.mu) - (x.mu - origin.mu) * (y.lambda - origin.lambda);
    return sgn(cross) > 0;
  });
  return poly;
}

std::vector<std::size_t> possibly_optimal_vertices(const Polytope2D& poly) {
  // Scoreboard-valid directions are (1, s) with s in (-1, 1/(m-1)].
  const Rational s_top = Rational(1, poly.m - 1);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    std::optional<Rational> lo;  // s >= lo
    std::optional<Rational> hi;  // s <= hi
    bool empty = false;
    // Constraint c0 + s * c1 >= 0.
    auto restrict = [&](const Rational& c0, const Rational& c1) {
      if (sgn(c1) == 0) {
        if (sgn(c0) < 0) empty = true;
        return;
      }
      const Rational bound = -c0 / c1;
      if (sgn(c1) > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else if (!hi || bound < *hi) {
        hi = bound;
      }
    };
    const Point2& v = poly.vertices[i];
    for (std::size_t j = 0; j < poly.vertices.size(); ++j) {
      if (j == i) continue;
      restrict(v.lambda - poly.vertices[j].lambda, v.mu - poly.vertices[j].mu);
    }
    for (const Point2& r : poly.rays) restrict(-r.lambda, -r.mu);
    if (empty) continue;
    const Rational upper = hi ? std::min(*hi, s_top) : s_top;
    if (upper <= -1) continue;
    if (lo && *lo > upper) continue;
    out.push_back(i);
  }
  return out;
}

DualOptimum q_dual(const MarginPair& margins, const Polytope2D& poly) {
  DualOptimum out;
  for (const Point2& r : poly.rays) {
    if (sgn(margins.a_margin * r.lambda + margins.b_deficit * r.mu) > 0) {
      out.value = ExtRational::unreachable();
      return out;
    }
  }
  std::optional<Rational> best;
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    const Point2& v = poly.vertices[i];
    const Rational value = margins.a_margin * v.lambda + margins.b_deficit * v.mu;
    if (!best || value > *best) {
      best = value;
      out.argmax.assign(1, i);
    } else if (value == *best) {
      out.argmax.push_back(i);
    }
  }
  out.value = *best;
  return out;
}

LinearProgram<Rational> stratified_lp(const MarginPair& margins, const ScoreVector& w) {
  const std::size_t n = static_cast<std::size_t>(w.m() - 1);
  LinearProgram<Rational> lp(Sense::kMinimize, std::vector<Rational>(n, 1));
  std::vector<Rational> gap(n);
  std::vector<Rational> lift(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int r = static_cast<int>(i);
    gap[i] = 1 - w.weight(r) + w.weight(r + 1);
    lift[i] = 1 - w.weight(r);
  }
  lp.add_row(std::move(gap), Relation::kGreaterEqual, margins.a_margin + margins.b_deficit);
  lp.add_row(std::move(lift), Relation::kGreaterEqual, margins.b_deficit);
  return lp;
}

LinearProgram<Rational> dual_lp(const MarginPair& margins, const ScoreVector& w) {
  LinearProgram<Rational> lp(Sense::kMaximize, {margins.a_margin, margins.b_deficit});
  for (int i = 0; i + 1 < w.m(); ++i) {
    lp.add_row({w.weight(i + 1), 1 - w.weight(i)}, Relation::kLessEqual, 1);
  }
  lp.add_row({1, -1}, Relation::kLessEqual, 0);
  return lp;
}

StratifiedSolution q_stratified(const MarginPair& margins, const ScoreVector& w) {
  const LpOutcome<Rational> out = solve(stratified_lp(margins, w));
  StratifiedSolution sol;
  if (out.status == LpStatus::kInfeasible) {
    sol.value = ExtRational::unreachable();
    return sol;
  }
  if (out.status == LpStatus::kUnbounded) throw Error(Errc::kNumericalFailure, "stratified LP reported unbounded");
  sol.value = out.value;
  sol.z = out.point;
  return sol;
}

FamilySpec family_from_name(std::string_view name, int m, const Rational& param) {
  FamilySpec spec;
  spec.m = m;
  if (name == "borda") {
    spec.family = RuleFamily::kBorda;
  } else if (name == "approval" || name == "k-approval" || name == "plurality") {
    spec.family = RuleFamily::kApproval;
    if (name == "plurality") {
      spec.k = 1;
    } else {
      if (!is_integral(param)) throw Error(Errc::kParamOutOfRange, "approval count must be an integer");
      spec.k = static_cast<int>(param.get_num().get_si());
    }
  } else if (name == "antiplurality" || name == "anti-plurality") {
    spec.family = RuleFamily::kAntiplurality;
  } else if (name == "easy" || name == "hard") {
    spec.family = name == "easy" ? RuleFamily::kEasy : RuleFamily::kHard;
    spec.p = param;
  } else {
    throw Error(Errc::kUnknownFamily, "no closed form for rule family '" + std::string(name) + "'");
  }
  return spec;
}

std::optional<FamilySpec> detect_family(const ScoreVector& w) {
  const int m = w.m();
  FamilySpec spec;
  spec.m = m;
  if (w.is_antiplurality()) {
    spec.family = RuleFamily::kAntiplurality;
    return spec;
  }
  const auto& ws = w.weights();
  if (std::all_of(ws.begin(), ws.end(), [](const Rational& x) { return x == 0 || x == 1; })) {
    spec.family = RuleFamily::kApproval;
    spec.k = static_cast<int>(std::count(ws.begin(), ws.end(), Rational(1)));
    return spec;
  }
  if (w == ScoreVector::borda(m)) {
    spec.family = RuleFamily::kBorda;
    return spec;
  }
  if (m == 3) {
    spec.p = 1 - w.weight(1);
    spec.family = spec.p * 2 >= 1 ? RuleFamily::kEasy : RuleFamily::kHard;
    return spec;
  }
  return std::nullopt;
}

namespace {

void check_three_candidate(const FamilySpec& spec) {
  if (spec.m != 3) throw Error(Errc::kParamOutOfRange, "easy and hard families are three-candidate rules");
  const bool ok = spec.family == RuleFamily::kEasy ? (spec.p * 2 >= 1 && spec.p <= 1)
                                                   : (sgn(spec.p) > 0 && spec.p * 2 <= 1);
  if (!ok) throw Error(Errc::kParamOutOfRange, "p = " + to_string(spec.p) + " outside the family's range");
}

}  // namespace

ScoreVector family_rule(const FamilySpec& spec) {
  switch (spec.family) {
    case RuleFamily::kBorda: return ScoreVector::borda(spec.m);
    case RuleFamily::kApproval: return ScoreVector::approval(spec.m, spec.k);
    case RuleFamily::kAntiplurality: return ScoreVector::antiplurality(spec.m);
    case RuleFamily::kEasy:
    case RuleFamily::kHard: {
      check_three_candidate(spec);
      const std::vector<Rational> raw{1, 1 - spec.p, 0};
      return ScoreVector::normalize(raw);
    }
  }
  throw Error(Errc::kUnknownFamily, "unhandled family");
}

ExtRational closed_form_q(const FamilySpec& spec, const MarginPair& margins) {
  if (spec.m < kMinCandidates) throw Error(Errc::kParamOutOfRange, "need at least 3 candidates");
  const Rational gap = margins.a_margin + margins.b_deficit;  // |a| - |b|
  switch (spec.family) {
    case RuleFamily::kBorda: return Rational(gap * (spec.m - 1) / (spec.m - 2));
    case RuleFamily::kApproval:
      if (spec.k < 1 || spec.k > spec.m - 2) {
        throw Error(Errc::kParamOutOfRange, "k-approval closed form needs 1 <= k <= m-2");
      }
      return gap;
    case RuleFamily::kAntiplurality:
      if (sgn(margins.b_deficit) > 0) return ExtRational::unreachable();
      return gap;
    case RuleFamily::kEasy:
      check_three_candidate(spec);
      return Rational(gap / spec.p);
    case RuleFamily::kHard: {
      check_three_candidate(spec);
      const Rational q = 1 - spec.p;
      const Rational positive = sgn(margins.b_deficit) > 0 ? margins.b_deficit : Rational(0);
      return Rational(gap / q + (1 / spec.p - 1 / q) * positive);
    }
  }
  throw Error(Errc::kUnknownFamily, "unhandled family");
}

ExtRational closed_form_q(const ScoreVector& w, const MarginPair& margins) {
  const auto spec = detect_family(w);
  if (!spec) throw Error(Errc::kUnknownFamily, "rule " + rule_string(w) + " has no closed form");
  return closed_form_q(*spec, margins);
}

Rational k_constant(const ScoreVector& w) {
  if (w.is_antiplurality()) return 0;
  const Rational fact(static_cast<unsigned long>(factorial(w.m())));
  return Rational(2 * fact / (1 - w.weight(w.m() - 2)));
}

Scoreboard synthetic_scoreboard(const MarginPair& margins, int m, const Rational& mean_score) {
  if (m < kMinCandidates) throw Error(Errc::kTooFewCandidates, "need at least 3 candidates");
  if (sgn(margins.a_margin + margins.b_deficit) <= 0 || margins.a_margin < margins.b_deficit * (m - 1)) {
    throw Error(Errc::kParamOutOfRange, "margins do not describe a scoreboard with a clear winner");
  }
  std::vector<Rational> scores(static_cast<std::size_t>(m));
  scores[0] = mean_score + margins.a_margin;
  scores[1] = mean_score - margins.b_deficit;
  const Rational rest = mean_score - (margins.a_margin - margins.b_deficit) / (m - 2);
  for (std::size_t c = 2; c < scores.size(); ++c) scores[c] = rest;
  return Scoreboard(std::move(scores), 0);
}

CoalitionPlan witness_from_z(const Scoreboard& s, const ScoreVector& w, const ZVector& z) {
  const int m = s.m();
  if (w.m() != m || z.size() != static_cast<std::size_t>(m - 1)) {
    throw Error(Errc::kDimensionMismatch, "z must have m-1 entries matching the rule");
  }
  const TopTwo top = top_two(s);
  if (!top.strict) throw Error(Errc::kNotStrictWinner, "scoreboard has a tie for first place");
  const Candidate a = top.a;
  const Candidate b = top.b;
  const Rational& sa = s.score(a);
  const Rational& sb = s.score(b);
  const Rational& nw = s.mean_score();

  // wt(i) is w_i with 1-based places.
  auto wt = [&](int place) -> const Rational& { return w.weight(place - 1); };
  auto zi = [&](int i) -> const Rational& { return z[static_cast<std::size_t>(i - 1)]; };
  Rational gap_row = 0;
  Rational acoef = 0;
  Rational bcoef = 0;
  for (int i = 1; i <= m - 1; ++i) {
    if (sgn(zi(i)) < 0) throw Error(Errc::kZInfeasible, "z has a negative entry");
    acoef += zi(i) * wt(i + 1);
    bcoef += zi(i) * (1 - wt(i));
  }
  gap_row = acoef + bcoef;
  if (gap_row < sa - sb || bcoef < nw - sb) throw Error(Errc::kZInfeasible, "z violates the stratified rows");

  // r: midpoint of its feasible window.
  Rational r = 0;
  if (sgn(acoef) > 0) {
    const Rational rhs = (m - 1) * (sb + bcoef - nw) + sa - nw;
    const Rational lo = std::max(Rational(0), Rational((sa - sb - bcoef) / acoef));
    const Rational hi = std::min(Rational(1), Rational(rhs / acoef));
    r = (lo + hi) / 2;
  }

  std::vector<Candidate> others;
  for (Candidate c = 0; c < m; ++c) {
    if (c != a && c != b) others.push_back(c);
  }
  std::vector<Rational> u(static_cast<std::size_t>(m), 0);
  std::vector<Rational> v(static_cast<std::size_t>(m), 0);
  if (m == 3) {
    u[static_cast<std::size_t>(others[0])] = 1;
    v[static_cast<std::size_t>(others[0])] = 1;
  } else {
    const Rational denom = r * acoef + bcoef / (m - 3);
    std::vector<Rational> upper(static_cast<std::size_t>(m), 0);
    Rational total = 0;
    if (sgn(denom) > 0) {
      for (Candidate c : others) {
        const Rational bound = (sb - s.score(c) + Rational(m - 2, m - 3) * bcoef) / denom;
        upper[static_cast<std::size_t>(c)] = bound;
        total += bound;
      }
    }
    for (Candidate c : others) {
      const auto ci = static_cast<std::size_t>(c);
      u[ci] = sgn(total) > 0 ? Rational(upper[ci] / total) : Rational(1, static_cast<long>(others.size()));
      v[ci] = (1 - u[ci]) / (m - 3);
    }
  }

  const TypeTable& table = type_table(m);
  const Rational f_m3(static_cast<unsigned long>(factorial(m - 3)));
  const Rational f_m2(static_cast<unsigned long>(factorial(m - 2)));
  CoalitionPlan plan(table.count);
  auto uu = [&](Candidate c) -> const Rational& { return u[static_cast<std::size_t>(c)]; };
  auto vv = [&](Candidate c) -> const Rational& { return v[static_cast<std::size_t>(c)]; };
  // place(t, k) is the candidate in 1-based place k.
  auto place = [&](std::size_t t, int k) { return table.at(t, k - 1); };

  for (std::size_t t = 0; t < table.count; ++t) {
    const int pb = table.rank_of(t, b) + 1;
    const int pa = table.rank_of(t, a) + 1;
    if (pa == pb + 1) {
      const int i = pb;
      if (i <= m - 2) plan.x[t] += r * uu(place(t, m)) * zi(i) / f_m3;
      if (i >= 2 && i <= m - 2) plan.x[t] += (1 - r) * vv(place(t, 1)) * zi(i) / f_m3;
      if (i == 1) {
        plan.x[t] += (1 - r) * zi(1) / f_m2;
        plan.y[t] += (1 - r) * zi(1) / f_m2;
      }
      if (i == m - 1) plan.x[t] += vv(place(t, 1)) * zi(m - 1) / f_m3;
    }
    if (pb == 1) {
      if (pa == m) {
        for (int i = 1; i <= m - 2; ++i) plan.y[t] += r * uu(place(t, i + 1)) * zi(i) / f_m3;
        plan.y[t] += vv(place(t, m - 1)) * zi(m - 1) / f_m3;
      }
      const int i = pa - 1;  // a in place i+1
      if (i >= 2 && i <= m - 2) plan.y[t] += (1 - r) * vv(place(t, i)) * zi(i) / f_m3;
    }
  }

  const Rational violation = adjacent_program_violation(s, w, plan);
  if (sgn(violation) != 0 || plan.size() != plan.ballots()) {
    throw Error(Errc::kConstructionFailed, "constructed coalition violates the adjacent program by " +
                                               to_string(violation));
  }
  return plan;
}

CoalitionPlan witness_from_z(const ManipulationInstance& inst, const ZVector& z) {
  if (inst.target() != inst.runner_up()) {
    throw Error(Errc::kParamOutOfRange, "witness construction targets the runner-up");
  }
  return witness_from_z(inst.scoreboard(), inst.rule(), z);
}

}  // namespace coalition
