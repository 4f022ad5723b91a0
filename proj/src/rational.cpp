#include "coalition/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace coalition {

namespace {

mpz_class parse_digits(std::string_view digits, std::string_view original) {
  if (digits.empty()) throw std::invalid_argument("malformed number: '" + std::string(original) + "'");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed number: '" + std::string(original) + "'");
    }
  }
  return mpz_class(std::string(digits));
}

mpz_class pow10(unsigned long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, e);
  return p;
}

Rational parse_decimal(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    mpz_class mag = parse_digits(exp_part, original);
    if (mag > 4000) throw std::invalid_argument("exponent out of range: '" + std::string(original) + "'");
    exponent = mag.get_si() * (exp_negative ? -1 : 1);
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
      throw std::invalid_argument("malformed number: '" + std::string(original) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    digits = std::string(s);
  }
  Rational q(parse_digits(digits, original));
  if (exponent > 0) q *= pow10(static_cast<unsigned long>(exponent));
  if (exponent < 0) q /= pow10(static_cast<unsigned long>(-exponent));
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(s.substr(0, slash), text);
    Rational den = parse_decimal(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  return parse_decimal(s, text);
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

}  // namespace coalition
