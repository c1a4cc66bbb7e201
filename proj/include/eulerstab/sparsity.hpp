#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace eulerstab {

/// Compressed row sparsity with sorted column indices per row.
struct SparsityPattern {
  std::vector<int> row_ptr{0};
  std::vector<int> cols;

  int rows() const { return static_cast<int>(row_ptr.size()) - 1; }
  int nnz() const { return static_cast<int>(cols.size()); }

  /// Position of (i, j) in cols, or -1.
  int find(int i, int j) const {
    const auto first = cols.begin() + row_ptr[i];
    const auto last = cols.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(first, last, j);
    return (it != last && *it == j) ? static_cast<int>(it - cols.begin()) : -1;
  }

  static SparsityPattern from_rows(const std::vector<std::vector<int>>& rows) {
    SparsityPattern p;
    p.row_ptr.assign(1, 0);
    for (auto r : rows) {
      std::sort(r.begin(), r.end());
      r.erase(std::unique(r.begin(), r.end()), r.end());
      p.cols.insert(p.cols.end(), r.begin(), r.end());
      p.row_ptr.push_back(static_cast<int>(p.cols.size()));
    }
    return p;
  }

  /// Pattern of this * this (graph distance <= 2 for a symmetric adjacency).
  SparsityPattern squared() const {
    const int n = rows();
    std::vector<std::vector<int>> lists(n);
    for (int i = 0; i < n; ++i) {
      for (int a = row_ptr[i]; a < row_ptr[i + 1]; ++a) {
        const int k = cols[a];
        for (int b = row_ptr[k]; b < row_ptr[k + 1]; ++b) lists[i].push_back(cols[b]);
      }
    }
    return from_rows(lists);
  }
};

}  // namespace eulerstab
