// Sparse multivariate polynomials with exact rational coefficients.

#ifndef HEAVISTEP_POLYNOMIAL_HPP
#define HEAVISTEP_POLYNOMIAL_HPP

#include "heavistep/rational.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace heavistep {

/// Parse failure with the 0-based character offset of the offending token.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int num_vars);

  /// Adds c * x^e, merging with an existing monomial. Zero results are dropped.
  void add_term(const Exponents& e, const Rational& c);

  int num_vars() const { return num_vars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int degree() const;

  Rational evaluate(std::span<const Rational> x) const;
  double evaluate(std::span<const double> x) const;

  /// Grammar: [+-] term {(+|-) term}; term := factor {'*' factor};
  /// factor := number | x<1-9> ['^' integer]; number := digits[.digits][/digits].
  /// The variable count is the largest index used, or min_vars if larger.
  static Polynomial parse(std::string_view text, int min_vars = 0);

  std::string to_string() const;

 private:
  int num_vars_;
  std::map<Exponents, Rational> terms_;
};

int total_degree(const Polynomial::Exponents& e);

}  // namespace heavistep

#endif  // HEAVISTEP_POLYNOMIAL_HPP
