#include "coalition/election.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "coalition/error.hpp"

namespace coalition {

namespace {

void check_m(int m) {
  if (m < kMinCandidates) throw Error(Errc::kTooFewCandidates, "need at least 3 candidates, got " + std::to_string(m));
  if (m > kMaxCandidates) throw Error(Errc::kMTooLarge, "at most 8 candidates supported, got " + std::to_string(m));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

// --- ScoreVector ---------------------------------------------------------

ScoreVector::ScoreVector(std::vector<Rational> weights) : weights_(std::move(weights)) {
  const auto m = static_cast<long>(weights_.size());
  Rational sum = 0;
  Rational sum_sq = 0;
  for (const auto& w : weights_) {
    sum += w;
    sum_sq += w * w;
    weights_d_.push_back(to_double(w));
  }
  mean_ = sum / m;
  mean_.canonicalize();
  variance_ = sum_sq / m - mean_ * mean_;
  variance_.canonicalize();
}

ScoreVector ScoreVector::normalize(std::span<const Rational> raw) {
  if (raw.size() < static_cast<std::size_t>(kMinCandidates)) {
    throw Error(Errc::kTooFewCandidates, "score vector needs at least 3 entries");
  }
  if (raw.size() > static_cast<std::size_t>(kMaxCandidates)) {
    throw Error(Errc::kMTooLarge, "score vector has more than 8 entries");
  }
  for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
    if (raw[i] < raw[i + 1]) throw Error(Errc::kNotMonotone, "score vector must be non-increasing");
  }
  const Rational& top = raw.front();
  const Rational& bottom = raw.back();
  if (top == bottom) throw Error(Errc::kConstantVector, "score vector is constant");
  const Rational range = top - bottom;
  std::vector<Rational> w;
  w.reserve(raw.size());
  for (const auto& x : raw) {
    Rational v = (x - bottom) / range;
    v.canonicalize();
    w.push_back(v);
  }
  return ScoreVector(std::move(w));
}

ScoreVector ScoreVector::borda(int m) {
  check_m(m);
  std::vector<Rational> w;
  for (int i = 0; i < m; ++i) w.push_back(make_rational(m - 1 - i, m - 1));
  return ScoreVector(std::move(w));
}

ScoreVector ScoreVector::approval(int m, int k) {
  check_m(m);
  if (k < 1 || k > m - 1) {
    throw Error(Errc::kParamOutOfRange, "approval count must lie in 1..m-1, got " + std::to_string(k));
  }
  std::vector<Rational> w;
  for (int i = 0; i < m; ++i) w.push_back(i < k ? 1 : 0);
  return ScoreVector(std::move(w));
}

ScoreVector ScoreVector::plurality(int m) { return approval(m, 1); }
ScoreVector ScoreVector::antiplurality(int m) { return approval(m, m - 1); }

double ScoreVector::sigma() const { return std::sqrt(to_double(variance_)); }

ScoreVector parse_rule(std::string_view text, int m) {
  auto need_m = [&]() {
    if (m <= 0) throw Error(Errc::kRuleParse, "rule '" + std::string(text) + "' needs a candidate count");
    check_m(m);
  };
  if (text == "borda") {
    need_m();
    return ScoreVector::borda(m);
  }
  if (text == "plurality") {
    need_m();
    return ScoreVector::plurality(m);
  }
  if (text == "antiplurality") {
    need_m();
    return ScoreVector::antiplurality(m);
  }
  if (text.starts_with("approval:")) {
    need_m();
    std::string_view k_text = text.substr(9);
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(std::string(k_text), &used);
      if (used != k_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(Errc::kRuleParse, "bad approval count in '" + std::string(text) + "'");
    }
    return ScoreVector::approval(m, k);
  }
  if (text.starts_with("weights:")) {
    std::vector<Rational> raw;
    for (auto part : split(text.substr(8), ',')) {
      try {
        raw.push_back(parse_rational(part));
      } catch (const std::invalid_argument& e) {
        throw Error(Errc::kRuleParse, "bad weight in '" + std::string(text) + "': " + e.what());
      }
    }
    if (m > 0 && static_cast<int>(raw.size()) != m) {
      throw Error(Errc::kRuleParse, "rule '" + std::string(text) + "' has " + std::to_string(raw.size()) +
                                        " weights but m = " + std::to_string(m));
    }
    return ScoreVector::normalize(raw);
  }
  throw Error(Errc::kRuleParse, "unknown rule '" + std::string(text) + "'");
}

std::string rule_string(const ScoreVector& w) {
  const int m = w.m();
  if (w == ScoreVector::borda(m)) return "borda";
  if (w == ScoreVector::plurality(m)) return "plurality";
  if (w == ScoreVector::antiplurality(m)) return "antiplurality";
  for (int k = 2; k <= m - 2; ++k) {
    if (w == ScoreVector::approval(m, k)) return "approval:" + std::to_string(k);
  }
  std::string out = "weights:";
  for (int i = 0; i < m; ++i) {
    if (i) out += ',';
    out += to_string(w.weight(i));
  }
  return out;
}

// --- voter types ---------------------------------------------------------

std::size_t factorial(int k) {
  std::size_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

const TypeTable& type_table(int m) {
  check_m(m);
  static std::array<std::unique_ptr<TypeTable>, kMaxCandidates + 1> tables;
  static std::array<std::once_flag, kMaxCandidates + 1> flags;
  std::call_once(flags[static_cast<std::size_t>(m)], [m]() {
    auto table = std::make_unique<TypeTable>();
    table->m = m;
    table->count = factorial(m);
    table->rankings.reserve(table->count * static_cast<std::size_t>(m));
    table->positions.resize(table->count * static_cast<std::size_t>(m));
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t t = 0;
    do {
      for (int r = 0; r < m; ++r) {
        table->rankings.push_back(perm[static_cast<std::size_t>(r)]);
        table->positions[t * static_cast<std::size_t>(m) + static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])] = r;
      }
      ++t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    tables[static_cast<std::size_t>(m)] = std::move(table);
  });
  return *tables[static_cast<std::size_t>(m)];
}

VoterType::VoterType(std::vector<Candidate> ranking) : ranking_(std::move(ranking)) {
  const int m = static_cast<int>(ranking_.size());
  check_m(m);
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (Candidate c : ranking_) {
    if (c < 0 || c >= m || seen[static_cast<std::size_t>(c)]) {
      throw Error(Errc::kInvalidProfile, "ranking is not a permutation of 0..m-1");
    }
    seen[static_cast<std::size_t>(c)] = true;
  }
}

VoterType VoterType::from_index(int m, std::size_t index) {
  const TypeTable& table = type_table(m);
  if (index >= table.count) throw Error(Errc::kInvalidProfile, "voter type index out of range");
  auto first = table.rankings.begin() + static_cast<std::ptrdiff_t>(index * static_cast<std::size_t>(m));
  return VoterType(std::vector<Candidate>(first, first + m));
}

int VoterType::rank_of(Candidate c) const {
  auto it = std::find(ranking_.begin(), ranking_.end(), c);
  return static_cast<int>(it - ranking_.begin());
}

std::size_t VoterType::index() const {
  // Lehmer code.
  const int m = this->m();
  std::size_t idx = 0;
  for (int i = 0; i < m; ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < m; ++j) {
      if (ranking_[static_cast<std::size_t>(j)] < ranking_[static_cast<std::size_t>(i)]) ++smaller_after;
    }
    idx += static_cast<std::size_t>(smaller_after) * factorial(m - 1 - i);
  }
  return idx;
}

const Rational& sigma(const VoterType& t, Candidate alpha, const ScoreVector& w) {
  return w.weight(t.rank_of(alpha));
}

// --- profiles ------------------------------------------------------------

Profile::Profile(int m) : m_(m), counts_(type_table(m).count, 0) {}

Profile::Profile(int m, std::vector<std::int64_t> counts) : m_(m), counts_(std::move(counts)) {
  if (counts_.size() != type_table(m).count) {
    throw Error(Errc::kInvalidProfile, "profile needs exactly m! type counts");
  }
  for (auto c : counts_) {
    if (c < 0) throw Error(Errc::kInvalidProfile, "negative vote count");
  }
}

std::int64_t Profile::n() const { return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0}); }

void Profile::add(const VoterType& t, std::int64_t votes) {
  if (t.m() != m_) throw Error(Errc::kInvalidProfile, "voter type has the wrong number of candidates");
  add(t.index(), votes);
}

void Profile::add(std::size_t type, std::int64_t votes) {
  if (type >= counts_.size()) throw Error(Errc::kInvalidProfile, "voter type index out of range");
  if (counts_[type] + votes < 0) throw Error(Errc::kInvalidProfile, "negative vote count");
  counts_[type] += votes;
}

Profile& Profile::operator+=(const Profile& other) {
  if (other.m_ != m_) throw Error(Errc::kInvalidProfile, "profiles have different candidate counts");
  for (std::size_t t = 0; t < counts_.size(); ++t) counts_[t] += other.counts_[t];
  return *this;
}

// --- scoreboards ---------------------------------------------------------

Scoreboard::Scoreboard(const Profile& p, const ScoreVector& w) : scores_(static_cast<std::size_t>(p.m())), n_(p.n()) {
  if (p.m() != w.m()) throw Error(Errc::kDimensionMismatch, "profile and rule disagree on m");
  const TypeTable& table = type_table(p.m());
  const int m = p.m();
  for (std::size_t t = 0; t < table.count; ++t) {
    const std::int64_t c = p.count(t);
    if (c == 0) continue;
    for (int r = 0; r < m - 1; ++r) {  // last place always scores 0
      scores_[static_cast<std::size_t>(table.at(t, r))] += w.weight(r) * c;
    }
  }
  rebuild();
}

Scoreboard::Scoreboard(std::vector<Rational> scores, std::int64_t n) : scores_(std::move(scores)), n_(n) {
  if (scores_.size() < static_cast<std::size_t>(kMinCandidates)) {
    throw Error(Errc::kTooFewCandidates, "scoreboard needs at least 3 candidates");
  }
  rebuild();
}

void Scoreboard::rebuild() {
  for (auto& s : scores_) s.canonicalize();
  order_.resize(scores_.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [this](Candidate x, Candidate y) {
    return scores_[static_cast<std::size_t>(x)] > scores_[static_cast<std::size_t>(y)];
  });
  Rational sum = 0;
  for (const auto& s : scores_) sum += s;
  mean_score_ = sum / static_cast<long>(scores_.size());
  mean_score_.canonicalize();
}

Scoreboard& Scoreboard::operator+=(const Scoreboard& other) {
  if (other.m() != m()) throw Error(Errc::kDimensionMismatch, "scoreboards disagree on m");
  for (std::size_t i = 0; i < scores_.size(); ++i) scores_[i] += other.scores_[i];
  n_ += other.n_;
  rebuild();
  return *this;
}

TopTwo top_two(const Scoreboard& s) {
  const auto& order = s.order();
  TopTwo out;
  out.a = order[0];
  out.b = order[1];
  out.strict = s.score(order[0]) > s.score(order[1]);
  out.runner_up_tie = s.score(order[1]) == s.score(order[2]);
  return out;
}

// --- Impartial Culture ---------------------------------------------------

Profile sample_ic(std::int64_t n, int m, Engine& engine) {
  check_m(m);
  if (n < 1) throw Error(Errc::kInvalidProfile, "need at least one voter");
  const std::size_t types = type_table(m).count;
  std::vector<std::int64_t> counts(types, 0);
  std::int64_t remaining = n;
  // Multinomial as a chain of conditional binomials.
  for (std::size_t t = 0; t + 1 < types && remaining > 0; ++t) {
    const double p = 1.0 / static_cast<double>(types - t);
    std::binomial_distribution<std::int64_t> draw(remaining, p);
    counts[t] = draw(engine);
    remaining -= counts[t];
  }
  counts[types - 1] += remaining;
  return Profile(m, std::move(counts));
}

Profile sample_ic(std::int64_t n, int m, std::uint64_t seed) {
  Engine engine = make_engine(seed, StreamTag::kProfile, 0);
  return sample_ic(n, m, engine);
}

}  // namespace coalition
