#include "heavistep/determinant.hpp"

#include <stdexcept>
#include <vector>

namespace heavistep {

std::int64_t cofactor_determinant(std::span<const std::int64_t> entries, int n) {
  if (n < 1 || entries.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("cofactor_determinant: expected n*n entries");
  }
  if (n == 1) return entries[0];
  if (n == 2) return entries[0] * entries[3] - entries[1] * entries[2];
  std::vector<std::int64_t> minor(static_cast<std::size_t>(n - 1) * (n - 1));
  std::int64_t det = 0;
  for (int col = 0; col < n; ++col) {
    if (entries[col] == 0) continue;
    std::size_t k = 0;
    for (int r = 1; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (c != col) minor[k++] = entries[r * n + c];
      }
    }
    const std::int64_t sub = cofactor_determinant(minor, n - 1);
    det += (col % 2 == 0 ? 1 : -1) * entries[col] * sub;
  }
  return det;
}

}  // namespace heavistep
