#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace tailgame {

// Exact rationals, always kept in lowest terms by GMP.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Renders "num/den" with a positive denominator, including "0/1" and "1/1".
inline std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace detail {
inline bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}
}  // namespace detail

// Accepts "num/den" or a bare integer. Returns nullopt on malformed input or
// a zero denominator.
inline std::optional<Rational> parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"}
                                                         : text.substr(slash + 1);
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den)) {
    return std::nullopt;
  }
  if (den.front() == '-' || den.front() == '+') return std::nullopt;
  if (num.front() == '+') num.remove_prefix(1);
  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d == 0) return std::nullopt;
  return Rational(n, d);
}

}  // namespace tailgame
