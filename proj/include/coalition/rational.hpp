#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace coalition {

/// Exact rational scalar used by every non-sampling code path.
using Rational = mpq_class;

/// Parses "3", "-2/3", "0.125" or "1e-2" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when integral).
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

}  // namespace coalition
