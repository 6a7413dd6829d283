#pragma once

#include <vector>

#include "rodsed/dense.hpp"

namespace rodsed {

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k belongs to values[k]; orthonormal
};

// Cyclic Jacobi rotation method for a real symmetric matrix. Throws
// Error(decomposition) if the input is not symmetric or the sweeps stall.
SymmetricEigen jacobi_eigen(const DenseMatrix& symmetric, int max_sweeps = 100);

}  // namespace rodsed
