// Cofactor-expansion determinant on integer matrices. This is the reference
// the determinant step network is checked against.

#ifndef HEAVISTEP_DETERMINANT_HPP
#define HEAVISTEP_DETERMINANT_HPP

#include <cstdint>
#include <span>

namespace heavistep {

/// Determinant of the row-major n x n matrix by Laplace expansion along the
/// first row. Exponential in n; intended for n <= 6.
std::int64_t cofactor_determinant(std::span<const std::int64_t> entries, int n);

}  // namespace heavistep

#endif  // HEAVISTEP_DETERMINANT_HPP
