// Exact rational scalars for step-network weights.

#ifndef HEAVISTEP_RATIONAL_HPP
#define HEAVISTEP_RATIONAL_HPP

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace boost {

// Boost 1.74's mixed integer/rational operator== recurses forever under
// C++20 rewritten comparisons. Exact non-template overloads win overload
// resolution and avoid it.
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, long b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, long long b) {
  return a.denominator() == 1 && a.numerator() == b;
}

}  // namespace boost

namespace heavistep {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

/// Parses "7", "-3/4" or a terminating decimal such as "0.25" exactly.
/// Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

/// Smallest-denominator rational p/q (q <= max_den) whose double value is
/// exactly x. Throws std::domain_error if none exists. Used to recover exact
/// weights from decimal text.
Rational recover_rational(double x, std::int64_t max_den = 1'000'000);

std::string to_string(const Rational& r);

}  // namespace heavistep

#endif  // HEAVISTEP_RATIONAL_HPP
