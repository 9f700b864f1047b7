#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <numeric>
#include <string>

#include "ruelle/errors.hpp"

// boost 1.74 mixed rational/integer == recurses forever under C++20 rewritten
// comparisons; exact non-template overloads win overload resolution.
namespace boost {
#define RUELLE_RATIONAL_EQ(T)                                                                      \
  inline bool operator==(const rational<std::int64_t>& a, T b) {                                  \
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);                  \
  }                                                                                                \
  inline bool operator==(T b, const rational<std::int64_t>& a) { return a == b; }                  \
  inline bool operator!=(const rational<std::int64_t>& a, T b) { return !(a == b); }               \
  inline bool operator!=(T b, const rational<std::int64_t>& a) { return !(a == b); }
RUELLE_RATIONAL_EQ(int)
RUELLE_RATIONAL_EQ(long)
RUELLE_RATIONAL_EQ(long long)
#undef RUELLE_RATIONAL_EQ
}  // namespace boost

namespace ruelle {

using Rational = boost::rational<std::int64_t>;

inline bool is_integer(const Rational& q) { return q.denominator() == 1; }

inline std::int64_t floor_of(const Rational& q) {
  std::int64_t n = q.numerator(), d = q.denominator();
  std::int64_t f = n / d;
  if ((n % d != 0) && (n < 0)) --f;
  return f;
}

// Representative of q mod 1 in [0,1).
inline Rational frac_of(const Rational& q) { return q - Rational(floor_of(q)); }

inline double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

inline std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

// Accepts "p", "p/q" and "-p/q".
inline Rational parse_rational(const std::string& text) {
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string t = trim(text);
  if (t.empty()) throw InputError("empty rational literal");
  auto to_int = [&](const std::string& part) -> std::int64_t {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      throw InputError("not a rational literal: '" + text + "'");
    }
    if (used != part.size()) throw InputError("not a rational literal: '" + text + "'");
    return v;
  };
  auto slash = t.find('/');
  if (slash == std::string::npos) return Rational(to_int(t));
  std::int64_t den = to_int(trim(t.substr(slash + 1)));
  if (den == 0) throw InputError("zero denominator in '" + text + "'");
  return Rational(to_int(trim(t.substr(0, slash))), den);
}

inline std::int64_t lcm(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

}  // namespace ruelle
