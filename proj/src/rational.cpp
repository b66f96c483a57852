#include "heavistep/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heavistep {

namespace {

std::int64_t parse_digits(std::string_view digits, std::string_view whole) {
  if (digits.empty() || digits.size() > 18) {
    throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  }
  std::int64_t v = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    }
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto den = parse_digits(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    value = Rational(parse_digits(s.substr(0, slash), text), den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto frac = s.substr(dot + 1);
    const auto whole = dot == 0 ? std::int64_t{0} : parse_digits(s.substr(0, dot), text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(whole) + (frac.empty() ? Rational(0) : Rational(parse_digits(frac, text), scale));
  } else {
    value = Rational(parse_digits(s, text));
  }
  return negative ? -value : value;
}

Rational recover_rational(double x, std::int64_t max_den) {
  if (!std::isfinite(x) || std::abs(x) > 9.0e15) {
    throw std::domain_error("cannot recover a rational from this value");
  }
  // Continued-fraction convergents h/k of x.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  double rest = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (static_cast<double>(h) / static_cast<double>(k) == x) return Rational(h, k);
    if (rest == 0.0) break;
    const double inv = 1.0 / rest;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    rest = inv - std::floor(inv);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_den || k_next <= 0) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  throw std::domain_error("value " + std::to_string(x) +
                          " is not a rational with a small denominator");
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace heavistep
