#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "mintime/errors.hpp"

namespace mintime {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class NumericMode { exact, floating };

template <typename S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr NumericMode mode = NumericMode::exact;

  static bool is_zero(const Rational& v, double /*tol*/ = 0.0) { return v == 0; }
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static Rational from_rational(const Rational& v) { return v; }

  static std::string to_string(const Rational& v) {
    const BigInt num = boost::multiprecision::numerator(v);
    const BigInt den = boost::multiprecision::denominator(v);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr NumericMode mode = NumericMode::floating;

  static bool is_zero(double v, double tol = 0.0) { return std::abs(v) <= tol; }
  static double abs(double v) { return std::abs(v); }
  static double to_double(double v) { return v; }
  static double from_rational(const Rational& v) { return v.convert_to<double>(); }

  static std::string to_string(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
  }
};

template <typename S>
S factorial(int n) {
  S out(1);
  for (int i = 2; i <= n; ++i) out *= S(i);
  return out;
}

template <typename S>
S binomial(int n, int k) {
  if (k < 0 || k > n) return S(0);
  // Exact integer arithmetic first; the count stays small for the orders used here.
  BigInt acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc *= (n - k + i);
    acc /= i;
  }
  if constexpr (std::is_same_v<S, Rational>) {
    return Rational(acc);
  } else {
    return acc.convert_to<S>();
  }
}

namespace detail {

inline BigInt parse_integer(std::string_view digits, std::string_view full) {
  if (digits.empty()) throw Error(ErrorKind::ParseError, "malformed number '" + std::string(full) + "'");
  for (char c : digits) {
    if (c < '0' || c > '9') throw Error(ErrorKind::ParseError, "malformed number '" + std::string(full) + "'");
  }
  return BigInt(std::string(digits));
}

inline BigInt pow10(int e) {
  BigInt out = 1;
  for (int i = 0; i < e; ++i) out *= 10;
  return out;
}

// Decimal with optional fraction and exponent, parsed exactly.
inline Rational parse_decimal(std::string_view text, std::string_view full) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    const BigInt ev = parse_integer(exp_text, full);
    if (ev > 4000) throw Error(ErrorKind::ParseError, "exponent out of range in '" + std::string(full) + "'");
    exponent = ev.convert_to<int>() * (exp_negative ? -1 : 1);
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
      throw Error(ErrorKind::ParseError, "malformed number '" + std::string(full) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<int>(frac_part.size());
  } else {
    digits = std::string(text);
  }
  BigInt mantissa = parse_integer(digits, full);
  Rational out = exponent >= 0 ? Rational(mantissa * pow10(exponent))
                               : Rational(mantissa, pow10(-exponent));
  return negative ? Rational(-out) : out;
}

}  // namespace detail

/// Parses "a/b", integers and decimal strings ("-1.25", "3e-2") into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const std::string_view full = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = detail::parse_decimal(text.substr(0, slash), full);
    const Rational den = detail::parse_decimal(text.substr(slash + 1), full);
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(full) + "'");
    return num / den;
  }
  return detail::parse_decimal(text, full);
}

template <typename S>
std::string to_string(const S& v) {
  return scalar_traits<S>::to_string(v);
}

template <typename S>
double to_double(const S& v) {
  return scalar_traits<S>::to_double(v);
}

}  // namespace mintime
