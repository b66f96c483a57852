#include "heavistep/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace heavistep {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::invalid_argument(message + " at position " + std::to_string(position)),
      position_(position) {}

int total_degree(const Polynomial::Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0);
}

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 1) throw std::invalid_argument("polynomial needs at least one variable");
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != num_vars_) {
    throw std::invalid_argument("exponent vector length does not match variable count");
  }
  if (std::any_of(e.begin(), e.end(), [](int d) { return d < 0; })) {
    throw std::invalid_argument("negative exponent");
  }
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != num_vars_) {
    throw std::invalid_argument("point dimension does not match variable count");
  }
  Rational sum{0};
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < num_vars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != num_vars_) {
    throw std::invalid_argument("point dimension does not match variable count");
  }
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = to_double(c);
    for (int i = 0; i < num_vars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

namespace {

struct RawTerm {
  Rational coefficient{1};
  std::map<int, int> powers;  // 0-based variable -> exponent
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<RawTerm> parse() {
    std::vector<RawTerm> terms;
    skip_space();
    if (at_end()) fail("empty polynomial expression");
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    for (;;) {
      RawTerm t = term();
      if (negative) t.coefficient = -t.coefficient;
      terms.push_back(std::move(t));
      skip_space();
      if (at_end()) break;
      if (peek() != '+' && peek() != '-') fail("expected '+' or '-'");
      negative = peek() == '-';
      ++pos_;
    }
    return terms;
  }

 private:
  RawTerm term() {
    RawTerm t;
    for (;;) {
      factor(t);
      skip_space();
      if (!at_end() && peek() == '*') {
        ++pos_;
        continue;
      }
      return t;
    }
  }

  void factor(RawTerm& t) {
    skip_space();
    if (at_end()) fail("unexpected end of expression");
    const char c = peek();
    if (c == 'x' || c == 'X') {
      ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())) || peek() == '0') {
        fail("expected variable index 1-9 after 'x'");
      }
      const int var = peek() - '1';
      ++pos_;
      if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        fail("only variables x1..x9 are supported");
      }
      int power = 1;
      skip_space();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_space();
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected a non-negative integer exponent");
        if (pos_ - start > 3) {
          pos_ = start;
          fail("exponent too large");
        }
        power = std::stoi(std::string(text_.substr(start, pos_ - start)));
      }
      t.powers[var] += power;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
                           peek() == '/')) {
        ++pos_;
      }
      try {
        t.coefficient *= parse_rational(text_.substr(start, pos_ - start));
      } catch (const std::invalid_argument&) {
        pos_ = start;
        fail("malformed number");
      }
      return;
    }
    if (c == '(' || c == ')') fail("parentheses are not supported");
    fail(std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, int min_vars) {
  const auto raw = Parser(text).parse();
  int vars = std::max(min_vars, 1);
  for (const auto& t : raw) {
    for (const auto& [v, p] : t.powers) vars = std::max(vars, v + 1);
  }
  Polynomial poly(vars);
  for (const auto& t : raw) {
    Exponents e(vars, 0);
    for (const auto& [v, p] : t.powers) e[v] = p;
    poly.add_term(e, t.coefficient);
  }
  return poly;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest total degree first.
  std::vector<std::pair<Exponents, Rational>> ordered(terms_.begin(), terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return total_degree(a.first) > total_degree(b.first);
  });
  for (const auto& [e, c] : ordered) {
    Rational mag = c < 0 ? -c : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? "-" : "+";
    }
    std::string mono;
    for (int i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += heavistep::to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += heavistep::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

}  // namespace heavistep
