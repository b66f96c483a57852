// Cyclic Jacobi eigensolver for small dense symmetric matrices.

#ifndef HEAVISTEP_EIGEN_HPP
#define HEAVISTEP_EIGEN_HPP

#include "heavistep/matrix.hpp"

#include <vector>

namespace heavistep {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
};

/// Throws std::invalid_argument for non-square or non-symmetric input.
EigenDecomposition jacobi_eigen(const Matrix& symmetric, int max_sweeps = 100);

/// Eigenvalues only, descending.
std::vector<double> eigen_spectrum(const Matrix& symmetric);

}  // namespace heavistep

#endif  // HEAVISTEP_EIGEN_HPP
