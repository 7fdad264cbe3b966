#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "niep/error.hpp"

namespace niep {

/// Exact rational number, always kept in lowest terms with a positive denominator.
using Scalar = mpq_class;
using Integer = mpz_class;

inline Scalar make_scalar(long numerator, long denominator = 1) {
  Scalar q{Integer(numerator), Integer(denominator)};
  q.canonicalize();
  return q;
}

inline Scalar make_scalar(const Integer& numerator, const Integer& denominator) {
  Scalar q{numerator, denominator};
  q.canonicalize();
  return q;
}

inline double to_double(const Scalar& q) { return q.get_d(); }

/// "p" for integers, "p/q" otherwise.
inline std::string format_scalar(const Scalar& q) { return q.get_str(10); }

inline Scalar abs(const Scalar& q) {
  Scalar r = q;
  if (sgn(r) < 0) r = -r;
  return r;
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline Integer parse_integer(std::string_view digits) {
  return Integer(std::string(digits), 10);
}

inline Integer pow10(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace detail

// Exponents beyond this are rejected rather than materialized.
inline constexpr long kMaxDecimalExponent = 4096;

/// Parses "7", "-3/4", "0.5", "1.25e-3" into an exact rational.
/// Decimals are read literally: "0.1" is 1/10, not the nearest double.
inline Scalar parse_scalar(std::string_view text) {
  auto fail = [&]() -> Error {
    return Error(Errc::parse_error, "not a rational literal: '" + std::string(text) + "'");
  };

  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw fail();

  bool negative = false;
  std::string_view body = text;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) throw fail();
    Integer d = detail::parse_integer(den);
    if (d == 0) throw Error(Errc::parse_error, "zero denominator in '" + std::string(text) + "'");
    Integer n = detail::parse_integer(num);
    if (negative) n = -n;
    return make_scalar(n, d);
  }

  std::string_view mantissa = body;
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = body.substr(0, e);
    auto exp_text = body.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!detail::all_digits(exp_text) || exp_text.size() > 6) throw fail();
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }

  std::string_view int_part = mantissa;
  std::string_view frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw fail();
  if (!int_part.empty() && !detail::all_digits(int_part)) throw fail();
  if (!frac_part.empty() && !detail::all_digits(frac_part)) throw fail();

  exponent -= static_cast<long>(frac_part.size());
  if (exponent > kMaxDecimalExponent || exponent < -kMaxDecimalExponent) {
    throw Error(Errc::parse_error, "exponent out of range in '" + std::string(text) + "'");
  }

  Integer digits = detail::parse_integer(std::string(int_part) + std::string(frac_part));
  if (negative) digits = -digits;
  if (exponent >= 0) return make_scalar(digits * detail::pow10(static_cast<unsigned long>(exponent)), Integer(1));
  return make_scalar(digits, detail::pow10(static_cast<unsigned long>(-exponent)));
}

}  // namespace niep
