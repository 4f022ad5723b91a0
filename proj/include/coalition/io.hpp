#pragma once

// File formats: profile JSON, polytope JSON, curve CSV and convergence CSV.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "coalition/asymptotics.hpp"
#include "coalition/election.hpp"
#include "coalition/reduction.hpp"

namespace coalition {

/// {"m":3,"votes":[{"ranking":[0,1,2],"count":4}, ...]}. Repeated rankings
/// accumulate. Throws Error{kInvalidProfile} on malformed input.
Profile parse_profile_json(std::string_view text);
std::string profile_to_json(const Profile& p);
Profile load_profile(const std::string& path);

/// Polytope dump with exact rationals as strings when `exact`, else numbers.
/// Adds sigma-scaled vertices and the possibly-optimal vertex set.
std::string polytope_json(const ScoreVector& w, const Polytope2D& poly, bool exact);

struct CurveHeader {
  std::string rule;
  int m = 0;
  std::uint64_t seed = 0;
};

void write_curve_csv(std::ostream& os, const CurveHeader& header, const GwCurve& curve);

struct CurveFile {
  CurveHeader header;
  std::vector<double> v;
  std::vector<double> g_hat;
  std::vector<double> half_width;
  std::vector<std::uint64_t> samples;
};

/// Throws Error{kMalformedInput}.
CurveFile read_curve_csv(std::istream& is);

void write_convergence_csv(std::ostream& os, const CurveHeader& header, const std::vector<ConvergenceRow>& rows);
std::vector<ConvergenceRow> read_convergence_csv(std::istream& is, CurveHeader* header = nullptr);

/// "start:stop:step", stop inclusive. Throws Error{kMalformedInput} or
/// Error{kParamOutOfRange} (step <= 0, stop < start).
std::vector<double> parse_grid(std::string_view spec);

}  // namespace coalition
