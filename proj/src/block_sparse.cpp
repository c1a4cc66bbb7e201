#include "eulerstab/block_sparse.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace eulerstab {

void BlockSparseMatrix::add(int i, int j, const Block& b) {
  const int p = pattern_->find(i, j);
  if (p < 0) {
    throw std::out_of_range("block (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside sparsity pattern");
  }
  for (int k = 0; k < kBlockSize; ++k) blocks_[p][k] += b[k];
}

void BlockSparseMatrix::add_scaled_identity(int i, int j, double s) {
  const int p = pattern_->find(i, j);
  if (p < 0) {
    throw std::out_of_range("block (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside sparsity pattern");
  }
  for (int k = 0; k < kComponents; ++k) blocks_[p][k * kComponents + k] += s;
}

void BlockSparseMatrix::set_zero() { std::fill(blocks_.begin(), blocks_.end(), Block{}); }

BlockVector BlockSparseMatrix::multiply(const BlockVector& x) const {
  const int n = rows();
  BlockVector y(n, State{});
  for (int i = 0; i < n; ++i) {
    State acc{};
    for (int p = pattern_->row_ptr[i]; p < pattern_->row_ptr[i + 1]; ++p) {
      const Block& b = blocks_[p];
      const State& xj = x[pattern_->cols[p]];
      for (int r = 0; r < kComponents; ++r) {
        for (int c = 0; c < kComponents; ++c) acc[r] += b[r * kComponents + c] * xj[c];
      }
    }
    y[i] = acc;
  }
  return y;
}

}  // namespace eulerstab
