#include "eulerstab/linear_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace eulerstab {

namespace {

constexpr double kTolerance = 1e-10;
constexpr int kRefinements = 3;

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

}  // namespace

struct LinearSolver::Impl {
  std::shared_ptr<const SparsityPattern> pattern;
  SpMat matrix;
  std::vector<int> value_index;  // block entry (pos * 16 + k) -> matrix value
  Eigen::UmfPackLU<SpMat> lu;
  bool analyzed = false;

  void prepare(const std::shared_ptr<const SparsityPattern>& pat) {
    if (pattern == pat) return;
    pattern = pat;
    analyzed = false;
    const int n = pat->rows() * kComponents;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(pat->nnz()) * kBlockSize);
    for (int i = 0; i < pat->rows(); ++i) {
      for (int p = pat->row_ptr[i]; p < pat->row_ptr[i + 1]; ++p) {
        const int j = pat->cols[p];
        for (int k = 0; k < kBlockSize; ++k) {
          trip.emplace_back(i * kComponents + k / kComponents, j * kComponents + k % kComponents,
                            static_cast<double>(p * kBlockSize + k));
        }
      }
    }
    matrix.resize(n, n);
    matrix.setFromTriplets(trip.begin(), trip.end());
    matrix.makeCompressed();
    value_index.assign(trip.size(), -1);
    for (int v = 0; v < matrix.nonZeros(); ++v) value_index[static_cast<int>(matrix.valuePtr()[v])] = v;
  }

  void fill(const BlockSparseMatrix& A) {
    double* vals = matrix.valuePtr();
    const int nnz = A.pattern().nnz();
    for (int p = 0; p < nnz; ++p) {
      const Block& b = A.at(p);
      for (int k = 0; k < kBlockSize; ++k) vals[value_index[p * kBlockSize + k]] = b[k];
    }
  }
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

BlockVector LinearSolver::solve(const BlockSparseMatrix& A, const BlockVector& b) {
  Impl& s = *impl_;
  s.prepare(A.pattern_ptr());
  s.fill(A);
  if (!s.analyzed) {
    s.lu.analyzePattern(s.matrix);
    s.analyzed = true;
  }
  s.lu.factorize(s.matrix);
  if (s.lu.info() != Eigen::Success) {
    throw std::runtime_error("linear_solve: sparse LU factorization failed (UMFPACK status " +
                             std::to_string(s.lu.umfpackFactorizeReturncode()) + ")");
  }

  const int n = static_cast<int>(b.size()) * kComponents;
  Eigen::Map<const Eigen::VectorXd> rhs(b.front().data(), n);
  const double bnorm = rhs.norm();
  BlockVector x(b.size(), State{});
  Eigen::Map<Eigen::VectorXd> sol(x.front().data(), n);
  if (bnorm == 0.0) return x;

  sol = s.lu.solve(rhs);
  Eigen::VectorXd r = rhs - s.matrix * sol;
  for (int it = 0; it < kRefinements && r.norm() > kTolerance * bnorm; ++it) {
    sol += s.lu.solve(r);
    r = rhs - s.matrix * sol;
  }
  const double rel = r.norm() / bnorm;
  if (!(rel <= kTolerance)) {
    throw std::runtime_error("linear_solve: relative residual " + std::to_string(rel) +
                             " above tolerance after refinement (matrix near singular)");
  }
  return x;
}

BlockVector linear_solve(const BlockSparseMatrix& A, const BlockVector& b) {
  LinearSolver solver;
  return solver.solve(A, b);
}

}  // namespace eulerstab
