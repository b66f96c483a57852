#include "heavistep/determinant.hpp"
#include "heavistep/polynet.hpp"
#include "heavistep/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace heavistep;

namespace {

Rational eval1(const StepNet& net, int x) {
  const std::vector<Rational> v{Rational(x)};
  return eval_step(net, v);
}

Rational eval_det(const StepNet& net, const std::vector<int>& entries) {
  std::vector<Rational> v;
  for (int e : entries) v.emplace_back(e);
  return eval_step(net, v);
}

}  // namespace

TEST_CASE("heavisidize the identity") {
  const auto net = heavisidize(Polynomial::parse("x1"), LatticeSpec(4));
  CHECK(net.shape().layer2 == 4);
  CHECK(eval1(net, 3) == 3);
  CHECK(eval1(net, 4) == 4);
  CHECK(eval1(net, 0) == 0);
}

TEST_CASE("heavisidize quadratics") {
  const auto sq = heavisidize(Polynomial::parse("x1^2"), LatticeSpec(2));
  CHECK(eval1(sq, 2) == 4);
  const auto p = heavisidize(Polynomial::parse("2*x1^2+5*x1+3"), LatticeSpec(6));
  CHECK(p.shape().layer2 == 43);
  CHECK(p.shape().layer1 == 6);
  CHECK(eval1(p, 1) == 10);
  const auto q = heavisidize(Polynomial::parse("x1^2+3*x1"), LatticeSpec(6));
  CHECK(eval1(q, 2) == 10);
}

TEST_CASE("heavisidize with a fractional lattice step") {
  const auto p = Polynomial::parse("x1*x2 - 2*x2^2 + 1/3");
  const LatticeSpec spec(4, Rational(1, 2));
  const auto net = heavisidize(p, spec);
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b <= 4; ++b) {
      const std::vector<Rational> x{Rational(a, 2), Rational(b, 2)};
      CHECK(eval_step(net, x) == p.evaluate(x));
    }
  }
}

TEST_CASE("node count formula") {
  CounterRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial p(3);
    std::size_t expected = 0;
    const int M = 2 + static_cast<int>(rng.below(3));
    for (int t = 0; t < 4; ++t) {
      Polynomial::Exponents e{static_cast<int>(rng.below(3)), static_cast<int>(rng.below(2)),
                              static_cast<int>(rng.below(2))};
      p.add_term(e, Rational(1 + static_cast<int>(rng.below(4))));
    }
    for (const auto& [e, c] : p.terms()) expected += static_cast<std::size_t>(std::pow(M, total_degree(e)));
    CHECK(heavisidized_node_count(p, M) == expected);
    CHECK(heavisidize(p, LatticeSpec(M)).shape().layer2 == expected);
  }
}

TEST_CASE("compiler correctness on random polynomials") {
  CounterRng rng(2024);
  const LatticeSpec spec(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int vars = 1 + static_cast<int>(rng.below(3));
    Polynomial p(vars);
    while (p.empty()) {
      const int terms = 1 + static_cast<int>(rng.below(4));
      for (int t = 0; t < terms; ++t) {
        Polynomial::Exponents e(static_cast<std::size_t>(vars), 0);
        const int degree = static_cast<int>(rng.below(4));
        for (int k = 0; k < degree; ++k) e[rng.below(static_cast<std::uint64_t>(vars))] += 1;
        p.add_term(e, Rational(static_cast<std::int64_t>(rng.below(11)) - 5));
      }
    }
    const auto net = heavisidize(p, spec);
    std::vector<Rational> x(static_cast<std::size_t>(vars));
    int total = 1;
    for (int v = 0; v < vars; ++v) total *= 6;
    for (int idx = 0; idx < total; ++idx) {
      int rest = idx;
      for (auto& xi : x) {
        xi = Rational(rest % 6);
        rest /= 6;
      }
      CHECK(eval_step(net, x) == p.evaluate(x));
    }
  }
}

TEST_CASE("heavisidize rejects bad input") {
  CHECK_THROWS(heavisidize(Polynomial(1), LatticeSpec(4)));
  CHECK_THROWS(heavisidize(Polynomial::parse("x1"), LatticeSpec(1)));
}

TEST_CASE("det_ansatz examples") {
  const auto d1 = det_ansatz(1, LatticeSpec(6));
  CHECK(eval_det(d1, {5}) == 5);
  const auto d2 = det_ansatz(2, LatticeSpec(4));
  CHECK(d2.shape().layer2 == 32);
  CHECK(eval_det(d2, {2, 1, 1, 1}) == 1);
  CHECK(eval_det(d2, {0, 0, 0, 0}) == 0);
  for (const auto& w : d2.w2) CHECK((w == 1 || w == -1));
  const auto d3 = det_ansatz(3, LatticeSpec(3));
  CHECK(eval_det(d3, {1, 0, 0, 0, 1, 0, 0, 0, 1}) == 1);
  CHECK_THROWS(det_ansatz(4, LatticeSpec(3)));
  CHECK_THROWS(det_ansatz(0, LatticeSpec(3)));
}

TEST_CASE("det_ansatz 2x2 exhaustive") {
  const auto net = det_ansatz(2, LatticeSpec(4));
  std::vector<std::int64_t> m(4);
  for (int idx = 0; idx < 256; ++idx) {
    int rest = idx;
    for (auto& v : m) {
      v = rest % 4;
      rest /= 4;
    }
    const std::vector<int> entries(m.begin(), m.end());
    CHECK(eval_det(net, entries) == cofactor_determinant(m, 2));
  }
}

TEST_CASE("identity_params") {
  const auto n4 = identity_params(4);
  CHECK(eval1(n4, 3) == 3);
  CHECK(eval1(n4, 0) == 0);
  CHECK(eval1(n4, 2) == 2);
  CHECK(eval1(identity_params(6), 6) == 6);
  CHECK(n4.w0(2, 0) == 1);
  CHECK(n4.b0[2] == -2);
  CHECK(n4.w1 == DenseMatrix<Rational>::identity(4));
  for (const auto& b : n4.b1) CHECK(b == 0);
  for (const auto& w : n4.w2) CHECK(w == 1);
}

TEST_CASE("square_params_m4") {
  const auto net = square_params_m4();
  CHECK(eval1(net, 0) == 0);
  CHECK(eval1(net, 1) == 1);
  CHECK(eval1(net, 2) == 4);
  CHECK_THROWS_AS(eval1(net, 3), std::out_of_range);
}

TEST_CASE("shift_equivalent") {
  const auto base = identity_params(6);
  const auto s1 = shift_equivalent(base, 1);
  CHECK(eval1(s1, 4) == 4);
  const auto s0 = shift_equivalent(base, 0);
  CHECK(s0.w1 == base.w1);
  CHECK(s0.b1 == base.b1);
  CHECK(s0.w2 == base.w2);
  for (int c = 0; c < 6; ++c) {
    const auto s = shift_equivalent(base, c);
    for (int x = 0; x <= 6; ++x) CHECK(eval1(s, x) == x);
  }
  CHECK_THROWS(shift_equivalent(base, 6));
  CHECK_THROWS(shift_equivalent(base, -1));
  CHECK_THROWS(shift_equivalent(square_params_m4(), 1));
}

TEST_CASE("shifted gauge has off-diagonal first-layer coupling") {
  const auto s = shift_equivalent(identity_params(6), 2);
  CHECK(s.w1(2, 0) == 1);
  CHECK(s.w1(2, 2) == 0);
  CHECK(s.b1[0] == -1);
  CHECK(s.b1[1] == -1);
}

TEST_CASE("second layer is a projector on the identity family") {
  // Removing layer 2 (output weights on layer 1 directly) changes nothing.
  const auto net = identity_params(8);
  for (int x = 0; x <= 8; ++x) {
    int direct = 0;
    for (int j = 0; j < 8; ++j) direct += theta(x - j);
    CHECK(eval1(net, x) == direct);
  }
}

TEST_CASE("eval_step domain checks") {
  const auto net = identity_params(4);
  CHECK_THROWS_AS(eval1(net, 5), std::out_of_range);
  CHECK_THROWS_AS(eval1(net, -1), std::out_of_range);
  const std::vector<Rational> two{Rational(1), Rational(1)};
  CHECK_THROWS(eval_step(net, two));
}

TEST_CASE("embed keeps weights and smooths") {
  const auto act = Activation::sigmoid(4.0, 0.25);
  const auto params = embed(identity_params(10), act);
  CHECK(params.act.is_sigmoid());
  CHECK(params.b0[3] == -3.0);
  double worst = 0.0;
  for (int x = 0; x <= 10; ++x) {
    const std::vector<double> v{static_cast<double>(x)};
    worst = std::max(worst, std::abs(forward(params, v) - x));
  }
  // Each dead layer-2 node leaks sigma(-xi) = 1 / (1 + e^4); the worst
  // point is x = 0 where all ten leak. Independent high-precision scan:
  CHECK(worst == doctest::Approx(0.18571684497027251).epsilon(1e-9));
  CHECK_THROWS(embed(identity_params(4), Activation::heaviside()));
}

TEST_CASE("embedding error depends on the sign of xi") {
  const auto plus = embed(identity_params(8), Activation::sigmoid(4.0, 0.25));
  const auto minus = embed(identity_params(8), Activation::sigmoid(4.0, -0.25));
  for (int x = 1; x <= 7; ++x) {
    const std::vector<double> v{static_cast<double>(x)};
    CHECK(forward(plus, v) - x < 0.2);
    CHECK(forward(minus, v) - x > 0.5);  // overshoot by roughly one lattice step
  }
}

TEST_CASE("embedding becomes exact at half-integers as K grows") {
  const auto net = identity_params(4);
  double prev = INFINITY;
  for (double K : {4.0, 8.0, 16.0}) {
    const auto params = embed(net, Activation::sigmoid(K, 1.0 / K));
    double worst = 0.0;
    for (double x : {0.5, 1.5, 2.5, 3.5}) {
      const std::vector<double> v{x};
      worst = std::max(worst, std::abs(forward(params, v) - std::ceil(x)));
    }
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 1e-5);
}
