#pragma once

#include <memory>

#include "eulerstab/sparsity.hpp"
#include "eulerstab/types.hpp"

namespace eulerstab {

inline constexpr int kBlockSize = kComponents * kComponents;

inline Block zero_block() { return Block{}; }

inline Block identity_block(double s = 1.0) {
  Block b{};
  for (int k = 0; k < kComponents; ++k) b[k * kComponents + k] = s;
  return b;
}

/// Square matrix of dense 4x4 blocks over a shared sparsity pattern.
class BlockSparseMatrix {
 public:
  BlockSparseMatrix() = default;
  explicit BlockSparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
      : pattern_(std::move(pattern)), blocks_(pattern_->nnz(), Block{}) {}

  const SparsityPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const SparsityPattern>& pattern_ptr() const { return pattern_; }
  int rows() const { return pattern_->rows(); }

  Block& at(int pos) { return blocks_[pos]; }
  const Block& at(int pos) const { return blocks_[pos]; }

  /// Block (i, j); zero when (i, j) is outside the pattern.
  Block get(int i, int j) const {
    const int p = pattern_->find(i, j);
    return p < 0 ? Block{} : blocks_[p];
  }

  /// Adds to block (i, j). Throws std::out_of_range outside the pattern.
  void add(int i, int j, const Block& b);
  void add_scaled_identity(int i, int j, double s);
  void set_zero();

  BlockVector multiply(const BlockVector& x) const;

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<Block> blocks_;
};

}  // namespace eulerstab
