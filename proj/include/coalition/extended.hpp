#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <utility>

#include "coalition/rational.hpp"

namespace coalition {

/// A value or the distinguished "unreachable" (+infinity) marker. Results that
/// may be infinite carry this type rather than a floating infinity.
template <class T>
class Extended {
 public:
  Extended() = default;
  Extended(T value) : finite_(true), value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)

  static Extended unreachable() { return Extended(); }

  bool is_finite() const { return finite_; }
  bool is_unreachable() const { return !finite_; }
  const T& value() const { return value_; }

  friend bool operator==(const Extended& x, const Extended& y) {
    if (x.finite_ != y.finite_) return false;
    return !x.finite_ || x.value_ == y.value_;
  }
  friend bool operator<(const Extended& x, const Extended& y) {
    if (!x.finite_) return false;
    if (!y.finite_) return true;
    return x.value_ < y.value_;
  }
  friend bool operator<=(const Extended& x, const Extended& y) { return !(y < x); }
  friend bool operator>(const Extended& x, const Extended& y) { return y < x; }
  friend bool operator>=(const Extended& x, const Extended& y) { return !(x < y); }

 private:
  bool finite_ = false;
  T value_{};
};

using ExtRational = Extended<Rational>;

inline std::string to_string(const ExtRational& q) { return q.is_finite() ? to_string(q.value()) : "unreachable"; }

inline double to_double(const ExtRational& q) {
  return q.is_finite() ? to_double(q.value()) : std::numeric_limits<double>::infinity();
}

inline std::ostream& operator<<(std::ostream& os, const ExtRational& q) { return os << to_string(q); }

}  // namespace coalition
