#pragma once

// Limit law of MCS / sqrt(n) under Impartial Culture.
//
// V_w = max { lambda (rho1 - Zbar) + mu (Zbar - rho2) } over scale * M_w, where
// Z is a vector of m iid standard normals, rho1 >= rho2 its two largest entries
// and scale = sigma_w * sqrt(m / (m-1)). g_w(v) = P(V_w <= v).

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coalition/election.hpp"
#include "coalition/reduction.hpp"
#include "coalition/rng.hpp"

namespace coalition {

struct LimitModel {
  ScoreVector rule;
  double mean = 0.0;
  double sigma = 0.0;
  double scale = 0.0;
  Polytope2D polytope;
  std::vector<std::array<double, 2>> scaled_vertices;
  std::vector<std::array<double, 2>> scaled_rays;
  /// c_w^2 when V_w = c_w (rho1 - rho2); exact.
  std::optional<Rational> c_squared;
  std::optional<double> c_w;

  /// Same rule with every scaled vertex multiplied by `factor`.
  LimitModel rescaled(double factor) const;
};

LimitModel limit_model(const ScoreVector& w);

/// V_w for one draw of Z (size m). Returns +infinity when unreachable.
double vw_from_z(const LimitModel& model, std::span<const double> z);
double sample_vw(const LimitModel& model, Engine& engine);
double sample_vw(const LimitModel& model, std::uint64_t seed);

struct GwCurve {
  std::vector<double> grid;
  std::vector<double> g_hat;        // after isotonic cleanup
  std::vector<double> half_width;   // 95% Wilson half-widths
  std::uint64_t samples = 0;
  double plateau = 1.0;             // fraction of finite V
  double plateau_half_width = 0.0;
};

inline constexpr std::uint64_t kMinCurveSamples = 10'000;

/// Throws Error{kParamOutOfRange} for fewer than kMinCurveSamples samples or an
/// unsorted grid. `threads` = 0 means hardware concurrency.
GwCurve gw_curve(const LimitModel& model, std::span<const double> grid, std::uint64_t samples, std::uint64_t seed,
                 unsigned threads = 0);

/// Raw V samples in deterministic order (chunked like gw_curve).
std::vector<double> sample_vw_batch(const LimitModel& model, std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads = 0);

struct Estimate {
  double value = 0.0;
  double half_width = 0.0;
  std::uint64_t samples = 0;
};

/// P(rho2(Z) < Zbar): the limiting probability that anti-plurality cannot be
/// manipulated at all.
Estimate plateau_probability(int m, std::uint64_t samples, std::uint64_t seed, unsigned threads = 0);

enum class Verdict { kDominates, kDominatedBy, kIncomparable, kIndistinguishable };
const char* to_string(Verdict v);

struct DominanceReport {
  Verdict verdict = Verdict::kIndistinguishable;
  bool analytic = false;
  std::optional<Rational> c1_squared;
  std::optional<Rational> c2_squared;
  /// Sampled mode: grid points (plus +infinity last) where the paired
  /// difference g1 - g2 is CI-separated from zero, with its sign.
  std::vector<double> separated_at;
  std::vector<int> separated_sign;
};

struct DominanceOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double z_threshold = 3.0;
};

/// kDominates means w1 dominates w2: g_{w1}(v) <= g_{w2}(v) for all v.
/// Throws Error{kGridTooCoarse} for fewer than 20 grid points and
/// Error{kDimensionMismatch} when the rules differ in m.
DominanceReport dominates(const ScoreVector& w1, const ScoreVector& w2, std::span<const double> grid,
                          const DominanceOptions& options = {});

struct ConvergenceRow {
  std::int64_t n = 0;
  std::uint64_t trials = 0;     // profiles with a clear winner
  std::uint64_t skipped = 0;    // profiles with a tie for first
  double ks = 0.0;
  double unreachable_fraction = 0.0;
};

struct ConvergenceOptions {
  std::uint64_t limit_samples = 1'000'000;
  unsigned threads = 0;
};

std::vector<ConvergenceRow> convergence_experiment(const ScoreVector& w, std::span<const std::int64_t> n_list,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   const ConvergenceOptions& options = {});

/// Two-sample Kolmogorov-Smirnov statistic; +infinity is a valid value.
double ks_distance(std::vector<double> x, std::vector<double> y);

/// Weighted least-squares non-decreasing fit (pool adjacent violators).
std::vector<double> isotonic_increasing(std::span<const double> y, std::span<const double> weights = {});

/// Half-width of the Wilson score interval.
double wilson_half_width(double p_hat, std::uint64_t n, double z = 1.959964);

unsigned resolve_threads(unsigned requested);

}  // namespace coalition
