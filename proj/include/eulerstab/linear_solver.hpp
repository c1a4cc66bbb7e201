#pragma once

#include <memory>

#include "eulerstab/block_sparse.hpp"

namespace eulerstab {

/// Sparse direct solver (UMFPACK through Eigen). The symbolic analysis is
/// reused while the sparsity pattern object stays the same. Solutions are
/// refined until ||Ax - b|| / ||b|| <= 1e-10; otherwise std::runtime_error.
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  BlockVector solve(const BlockSparseMatrix& A, const BlockVector& b);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

BlockVector linear_solve(const BlockSparseMatrix& A, const BlockVector& b);

}  // namespace eulerstab
