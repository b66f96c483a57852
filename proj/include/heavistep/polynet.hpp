// Compilation of polynomials and determinants into exact two-layer
// Heaviside networks ("Heavisidization"), reference weight assignments, and
// gauge-equivalent variants.
//
// Layout produced by heavisidize and det_ansatz:
//   layer 1: one node theta(x_i - s*eps) per input i and shift s in [0, M),
//            node index i*M + s, shared by every monomial;
//   layer 2: one node per (monomial, shift tuple) whose preactivation is the
//            sum of the selected layer-1 outputs minus (degree - 1), so it
//            fires only when all selected steps fire;
//   output:  coefficient * eps^degree on each layer-2 node.
// A monomial of degree n therefore owns exactly M^n layer-2 nodes.

#ifndef HEAVISTEP_POLYNET_HPP
#define HEAVISTEP_POLYNET_HPP

#include "heavistep/elementary_ops.hpp"
#include "heavistep/matrix.hpp"
#include "heavistep/network.hpp"
#include "heavistep/polynomial.hpp"
#include "heavistep/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace heavistep {

/// Exact two-layer Heaviside network with rational weights.
struct StepNet {
  DenseMatrix<Rational> w0;  // N1 x d
  std::vector<Rational> b0;  // N1
  DenseMatrix<Rational> w1;  // N2 x N1
  std::vector<Rational> b1;  // N2
  std::vector<Rational> w2;  // N2
  Rational b2{0};
  LatticeSpec spec;
  /// Inclusive upper bound per input; every input's lower bound is 0.
  std::vector<Rational> valid_domain;

  ParamShape shape() const;
  void check_consistent() const;
};

/// Requires spec.M >= 2 and a non-empty polynomial. Valid for inputs that
/// are multiples of eps in [0, M*eps].
StepNet heavisidize(const Polynomial& poly, const LatticeSpec& spec);

/// Second-layer node count heavisidize will produce: sum over terms of M^degree.
std::size_t heavisidized_node_count(const Polynomial& poly, int M);

/// Determinant of an n x n matrix (n in 1..3), inputs row-major. One layer-2
/// node per (permutation, lattice tuple) with output weight sign(perm)*eps^n.
StepNet det_ansatz(int n, const LatticeSpec& spec);

/// w0 = 1, b0_j = -(j-1), w1 = identity, b1 = 0, w2 = 1 for j = 1..M.
StepNet identity_params(int M);

/// Four-node network computing x^2 for x in {0, 1, 2}.
StepNet square_params_m4();

/// Shifted-diagonal gauge of an identity-family net: layer-2 node j reads
/// layer-1 node j - c, and c extra leading layer-2 nodes carry b1 = -1 so
/// they never fire. N2 grows from M to M + c; the output is unchanged on the
/// whole valid domain. c == 0 returns the input unchanged.
StepNet shift_equivalent(const StepNet& net, int c);

/// Exact forward pass. Throws std::out_of_range outside valid_domain.
Rational eval_step(const StepNet& net, std::span<const Rational> x);

/// Converts weights to doubles with the given activation (any kind).
NetworkParams to_network_params(const StepNet& net, const Activation& act);

/// Smoothed embedding: same weights, sigmoid activation. Exactness becomes
/// approximate with error controlled by K and xi.
NetworkParams embed(const StepNet& net, const Activation& act);

}  // namespace heavistep

#endif  // HEAVISTEP_POLYNET_HPP
