// Truncated Heaviside sums that realize integer arithmetic.
//
// Each infinite lattice sum is cut at M terms with grid step eps. Inputs
// outside the range where the truncation is exact raise std::out_of_range
// instead of being clipped.

#ifndef HEAVISTEP_ELEMENTARY_OPS_HPP
#define HEAVISTEP_ELEMENTARY_OPS_HPP

#include "heavistep/rational.hpp"

#include <cstdint>
#include <span>

namespace heavistep {

struct LatticeSpec {
  int M = 1;
  Rational eps{1};

  LatticeSpec() = default;
  LatticeSpec(int m, Rational step = Rational{1});

  double step() const { return to_double(eps); }
  /// (M - 1) * eps, the largest magnitude the single-sided sums cover.
  double max_input() const;
};

bool operator==(const LatticeSpec& a, const LatticeSpec& b);

/// eps * (sum_i theta(x - i eps) - sum_i theta(-x - i eps)), i < M.
double identity_sum(double x, const LatticeSpec& spec);

/// x + y for non-negative inputs from the OR lattice. The double sum of
/// OR(x - i eps, y - j eps) counts M (x + y) / eps - x y / eps^2 pairs, so
/// the AND lattice is added back before dividing by M.
double add_or(double x, double y, const LatticeSpec& spec);

/// eps^2 * sum_{i,j < M} theta(theta(x - i eps) + theta(y - j eps) - 1).
double multiply(double x, double y, const LatticeSpec& spec);

/// floor(x / y) as sum_{i=1..M} theta(x - i y + 1). Needs 1 <= x <= M.
std::int64_t divide_floor(std::int64_t x, std::int64_t y, const LatticeSpec& spec);

/// sum_{i=0..M} theta(x - i^alpha): the exact root on perfect powers and
/// the ceiling of the root elsewhere.
std::int64_t int_root(double x, int alpha, const LatticeSpec& spec);

struct FunctionSample {
  double x;
  double fx;
};

/// Discrete integral of x d theta(f(x)) over samples sorted by x. Upward
/// crossings contribute +x, downward crossings -x, each located at the
/// last sample before the jump. Throws std::domain_error without a crossing.
double zero_of(std::span<const FunctionSample> samples);

}  // namespace heavistep

#endif  // HEAVISTEP_ELEMENTARY_OPS_HPP
