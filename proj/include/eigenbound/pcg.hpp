#pragma once

#include <cstddef>
#include <vector>

#include "eigenbound/sparse.hpp"

namespace eigenbound {

struct PCGReport {
  std::size_t iterations = 0;
  /// ||x* - x_k||_A / ||x* - x_0||_A for k = 0..iterations.
  std::vector<double> energy_error_history;
  bool converged = false;
};

/// Preconditioned CG from x_0 = 0, applying Atilde^{-1} through a dense
/// Cholesky factor. The reference solution x* comes from a dense Cholesky
/// solve of A x* = b; iteration stops at the first k with
/// ||x* - x_k||_A <= factor * ||x*||_A, or after 10 n steps.
PCGReport pcg_solve(const SymmetricSparseMatrix& a, const SymmetricSparseMatrix& atilde,
                    const std::vector<double>& b, double factor = 1e-9);

}  // namespace eigenbound
