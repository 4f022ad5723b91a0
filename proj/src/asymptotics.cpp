#include "coalition/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "coalition/error.hpp"

namespace coalition {

namespace {

constexpr std::uint64_t kChunk = 1u << 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs fn(k) for k in [0, chunks) on a small pool. Work items never depend on
// the thread that executes them.
template <class Fn>
void run_chunks(std::uint64_t chunks, unsigned threads, Fn fn) {
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    try {
      for (;;) {
        const std::uint64_t k = next.fetch_add(1);
        if (k >= chunks) break;
        fn(k);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };
  const auto pool_size = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), chunks));
  if (pool_size <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (unsigned i = 0; i < pool_size; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t chunk_count(std::uint64_t samples) { return (samples + kChunk - 1) / kChunk; }
std::uint64_t chunk_size(std::uint64_t samples, std::uint64_t k) { return std::min(kChunk, samples - k * kChunk); }

struct TopStats {
  double rho1;
  double rho2;
  double mean;
};

TopStats top_stats(std::span<const double> z) {
  double rho1 = -kInf;
  double rho2 = -kInf;
  double sum = 0.0;
  for (double x : z) {
    sum += x;
    if (x > rho1) {
      rho2 = rho1;
      rho1 = x;
    } else if (x > rho2) {
      rho2 = x;
    }
  }
  return {rho1, rho2, sum / static_cast<double>(z.size())};
}

// Position of v on the extended grid: grid points then a final "+infinity"
// point that every finite value sits below.
std::size_t grid_slot(std::span<const double> grid, double v) {
  if (std::isinf(v)) return grid.size() + 1;
  return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), v) - grid.begin());
}

void check_grid(std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw Error(Errc::kParamOutOfRange, "grid must be sorted ascending");
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

LimitModel LimitModel::rescaled(double factor) const {
  LimitModel out = *this;
  for (auto& v : out.scaled_vertices) {
    v[0] *= factor;
    v[1] *= factor;
  }
  out.scale *= factor;
  if (out.c_w) *out.c_w *= factor;
  if (out.c_squared) out.c_squared.reset();
  return out;
}

LimitModel limit_model(const ScoreVector& w) {
  LimitModel model{w, to_double(w.mean()), w.sigma(), 0.0, mw_polytope(w), {}, {}, std::nullopt, std::nullopt};
  const int m = w.m();
  model.scale = model.sigma * std::sqrt(static_cast<double>(m) / (m - 1));
  for (const Point2& v : model.polytope.vertices) {
    model.scaled_vertices.push_back({model.scale * to_double(v.lambda), model.scale * to_double(v.mu)});
  }
  for (const Point2& r : model.polytope.rays) {
    model.scaled_rays.push_back({model.scale * to_double(r.lambda), model.scale * to_double(r.mu)});
  }
  const auto optimal = possibly_optimal_vertices(model.polytope);
  if (model.polytope.rays.empty() && optimal.size() == 1) {
    const Point2& v = model.polytope.vertices[optimal.front()];
    if (v.lambda == v.mu) {
      model.c_squared = Rational(w.variance() * m / (m - 1) * v.lambda * v.lambda);
      model.c_w = std::sqrt(to_double(*model.c_squared));
    }
  }
  return model;
}

double vw_from_z(const LimitModel& model, std::span<const double> z) {
  const TopStats t = top_stats(z);
  const double dl = t.rho1 - t.mean;
  const double dm = t.mean - t.rho2;
  for (const auto& r : model.scaled_rays) {
    if (r[0] * dl + r[1] * dm > 0.0) return kInf;
  }
  double best = 0.0;
  for (const auto& v : model.scaled_vertices) best = std::max(best, v[0] * dl + v[1] * dm);
  return best;
}

double sample_vw(const LimitModel& model, Engine& engine) {
  std::normal_distribution<double> normal;
  std::array<double, kMaxCandidates> z{};
  const auto m = static_cast<std::size_t>(model.rule.m());
  for (std::size_t i = 0; i < m; ++i) z[i] = normal(engine);
  return vw_from_z(model, std::span<const double>(z.data(), m));
}

double sample_vw(const LimitModel& model, std::uint64_t seed) {
  Engine engine(seed);
  return sample_vw(model, engine);
}

std::vector<double> sample_vw_batch(const LimitModel& model, std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads) {
  std::vector<double> out(samples);
  run_chunks(chunk_count(samples), threads, [&](std::uint64_t k) {
    Engine engine = make_engine(seed, StreamTag::kLimit, k);
    const std::uint64_t base = k * kChunk;
    const std::uint64_t size = chunk_size(samples, k);
    for (std::uint64_t i = 0; i < size; ++i) out[base + i] = sample_vw(model, engine);
  });
  return out;
}

double wilson_half_width(double p_hat, std::uint64_t n, double z) {
  if (n == 0) return 1.0;
  const double nn = static_cast<double>(n);
  const double z2 = z * z;
  return z / (1.0 + z2 / nn) * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn));
}

GwCurve gw_curve(const LimitModel& model, std::span<const double> grid, std::uint64_t samples, std::uint64_t seed,
                 unsigned threads) {
  if (samples < kMinCurveSamples) {
    throw Error(Errc::kParamOutOfRange, "need at least " + std::to_string(kMinCurveSamples) + " samples");
  }
  check_grid(grid);
  const std::uint64_t chunks = chunk_count(samples);
  // Per chunk: how many samples first fit under each extended grid slot.
  std::vector<std::vector<std::uint64_t>> hist(chunks);
  run_chunks(chunks, threads, [&](std::uint64_t k) {
    Engine engine = make_engine(seed, StreamTag::kLimit, k);
    std::vector<std::uint64_t> local(grid.size() + 2, 0);
    const std::uint64_t size = chunk_size(samples, k);
    for (std::uint64_t i = 0; i < size; ++i) ++local[grid_slot(grid, sample_vw(model, engine))];
    hist[k] = std::move(local);
  });
  std::vector<std::uint64_t> total(grid.size() + 2, 0);
  for (const auto& h : hist) {
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += h[j];
  }

  GwCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.samples = samples;
  const double n = static_cast<double>(samples);
  std::vector<double> raw;
  std::uint64_t below = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    below += total[j];
    raw.push_back(static_cast<double>(below) / n);
  }
  curve.g_hat = isotonic_increasing(raw);
  for (double g : curve.g_hat) curve.half_width.push_back(wilson_half_width(g, samples));
  const std::uint64_t finite = samples - total.back();
  curve.plateau = static_cast<double>(finite) / n;
  curve.plateau_half_width = wilson_half_width(curve.plateau, samples);
  return curve;
}

Estimate plateau_probability(int m, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  if (m < kMinCandidates) throw Error(Errc::kTooFewCandidates, "need at least 3 candidates");
  if (m > kMaxCandidates) throw Error(Errc::kMTooLarge, "at most 8 candidates supported");
  if (samples == 0) throw Error(Errc::kParamOutOfRange, "need at least one sample");
  const std::uint64_t chunks = chunk_count(samples);
  std::vector<std::uint64_t> hits(chunks, 0);
  run_chunks(chunks, threads, [&](std::uint64_t k) {
    Engine engine = make_engine(seed, StreamTag::kPlateau, k);
    std::normal_distribution<double> normal;
    std::array<double, kMaxCandidates> z{};
    const auto mm = static_cast<std::size_t>(m);
    std::uint64_t count = 0;
    const std::uint64_t size = chunk_size(samples, k);
    for (std::uint64_t i = 0; i < size; ++i) {
      for (std::size_t c = 0; c < mm; ++c) z[c] = normal(engine);
      const TopStats t = top_stats(std::span<const double>(z.data(), mm));
      if (t.rho2 < t.mean) ++count;
    }
    hits[k] = count;
  });
  Estimate est;
  est.samples = samples;
  est.value = static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::uint64_t{0})) /
              static_cast<double>(samples);
  est.half_width = wilson_half_width(est.value, samples);
  return est;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kDominates: return "dominates";
    case Verdict::kDominatedBy: return "dominated";
    case Verdict::kIncomparable: return "incomparable";
    case Verdict::kIndistinguishable: return "indistinguishable";
  }
  return "?";
}

DominanceReport dominates(const ScoreVector& w1, const ScoreVector& w2, std::span<const double> grid,
                          const DominanceOptions& options) {
  if (grid.size() < 20) {
    throw Error(Errc::kGridTooCoarse, "dominance needs at least 20 grid points, got " + std::to_string(grid.size()));
  }
  if (w1.m() != w2.m()) throw Error(Errc::kDimensionMismatch, "rules must share the candidate count");
  check_grid(grid);
  const LimitModel m1 = limit_model(w1);
  const LimitModel m2 = limit_model(w2);

  DominanceReport report;
  report.c1_squared = m1.c_squared;
  report.c2_squared = m2.c_squared;
  if (m1.c_squared && m2.c_squared) {
    // g(v) = P(rho1 - rho2 <= v / c): a larger coefficient is uniformly less manipulable.
    report.analytic = true;
    if (*m1.c_squared > *m2.c_squared) {
      report.verdict = Verdict::kDominates;
    } else if (*m1.c_squared < *m2.c_squared) {
      report.verdict = Verdict::kDominatedBy;
    } else {
      report.verdict = Verdict::kIndistinguishable;
    }
    return report;
  }

  // Paired sampling: both rules see the same Z, so the indicator difference
  // [V1 <= v] - [V2 <= v] has small variance where the curves are close.
  const std::size_t points = grid.size() + 1;  // last point is +infinity
  const std::uint64_t samples = options.samples;
  const std::uint64_t chunks = chunk_count(samples);
  std::vector<std::vector<std::int64_t>> plus(chunks);
  std::vector<std::vector<std::int64_t>> minus(chunks);
  run_chunks(chunks, options.threads, [&](std::uint64_t k) {
    Engine engine = make_engine(options.seed, StreamTag::kCompare, k);
    std::normal_distribution<double> normal;
    std::array<double, kMaxCandidates> z{};
    const auto m = static_cast<std::size_t>(w1.m());
    std::vector<std::int64_t> p(points + 1, 0);
    std::vector<std::int64_t> q(points + 1, 0);
    const std::uint64_t size = chunk_size(samples, k);
    for (std::uint64_t i = 0; i < size; ++i) {
      for (std::size_t c = 0; c < m; ++c) z[c] = normal(engine);
      const std::span<const double> zs(z.data(), m);
      const std::size_t s1 = grid_slot(grid, vw_from_z(m1, zs));
      const std::size_t s2 = grid_slot(grid, vw_from_z(m2, zs));
      // Difference arrays over the extended grid.
      if (s1 < s2) {
        ++p[s1];
        --p[s2];
      } else if (s2 < s1) {
        ++q[s2];
        --q[s1];
      }
    }
    plus[k] = std::move(p);
    minus[k] = std::move(q);
  });
  std::vector<std::int64_t> dp(points + 1, 0);
  std::vector<std::int64_t> dq(points + 1, 0);
  for (std::uint64_t k = 0; k < chunks; ++k) {
    for (std::size_t j = 0; j <= points; ++j) {
      dp[j] += plus[k][j];
      dq[j] += minus[k][j];
    }
  }
  bool above = false;
  bool below = false;
  std::int64_t np = 0;
  std::int64_t nq = 0;
  const double n = static_cast<double>(samples);
  for (std::size_t j = 0; j < points; ++j) {
    np += dp[j];
    nq += dq[j];
    const double mean = static_cast<double>(np - nq) / n;
    const double second = static_cast<double>(np + nq) / n;
    const double se = std::sqrt(std::max(0.0, second - mean * mean) / n);
    int sign = 0;
    if (mean - options.z_threshold * se > 0.0) sign = 1;
    if (mean + options.z_threshold * se < 0.0) sign = -1;
    if (sign != 0) {
      report.separated_at.push_back(j < grid.size() ? grid[j] : kInf);
      report.separated_sign.push_back(sign);
      (sign > 0 ? above : below) = true;
    }
  }
  if (above && below) {
    report.verdict = Verdict::kIncomparable;
  } else if (below) {
    report.verdict = Verdict::kDominates;
  } else if (above) {
    report.verdict = Verdict::kDominatedBy;
  } else {
    report.verdict = Verdict::kIndistinguishable;
  }
  return report;
}

double ks_distance(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw Error(Errc::kParamOutOfRange, "KS distance needs two non-empty samples");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return best;
}

std::vector<double> isotonic_increasing(std::span<const double> y, std::span<const double> weights) {
  if (!weights.empty() && weights.size() != y.size()) {
    throw Error(Errc::kDimensionMismatch, "isotonic weights must match the data");
  }
  struct Block {
    double value;
    double weight;
    std::size_t length;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i], weights.empty() ? 1.0 : weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].value > blocks.back().value) {
      const Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double w = prev.weight + top.weight;
      prev.value = (prev.value * prev.weight + top.value * top.weight) / w;
      prev.weight = w;
      prev.length += top.length;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) out.insert(out.end(), b.length, b.value);
  return out;
}

std::vector<ConvergenceRow> convergence_experiment(const ScoreVector& w, std::span<const std::int64_t> n_list,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   const ConvergenceOptions& options) {
  if (trials == 0) throw Error(Errc::kParamOutOfRange, "need at least one trial");
  const LimitModel model = limit_model(w);
  const std::vector<double> limit = sample_vw_batch(model, options.limit_samples, seed, options.threads);
  const int m = w.m();

  std::vector<ConvergenceRow> rows;
  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    const std::int64_t n = n_list[idx];
    if (n < 1) throw Error(Errc::kInvalidProfile, "voter counts must be positive");
    const std::uint64_t stream = derive_seed(seed, StreamTag::kConverge, idx);
    const double root_n = std::sqrt(static_cast<double>(n));
    // NaN marks a skipped (tied) profile.
    std::vector<double> values(trials);
    const std::uint64_t chunk = 1024;
    run_chunks((trials + chunk - 1) / chunk, options.threads, [&](std::uint64_t k) {
      const std::uint64_t end = std::min(trials, (k + 1) * chunk);
      for (std::uint64_t t = k * chunk; t < end; ++t) {
        Engine engine = make_engine(stream, StreamTag::kProfile, t);
        const Scoreboard board(sample_ic(n, m, engine), w);
        if (!top_two(board).strict) {
          values[t] = std::numeric_limits<double>::quiet_NaN();
          continue;
        }
        const ExtRational q = q_dual(margins_of(board), model.polytope).value;
        values[t] = q.is_finite() ? to_double(q.value()) / root_n : kInf;
      }
    });
    ConvergenceRow row;
    row.n = n;
    std::vector<double> kept;
    kept.reserve(trials);
    std::uint64_t unreachable = 0;
    for (double v : values) {
      if (std::isnan(v)) {
        ++row.skipped;
        continue;
      }
      if (std::isinf(v)) ++unreachable;
      kept.push_back(v);
    }
    row.trials = kept.size();
    if (!kept.empty()) {
      row.unreachable_fraction = static_cast<double>(unreachable) / static_cast<double>(kept.size());
      row.ks = ks_distance(std::move(kept), limit);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace coalition
