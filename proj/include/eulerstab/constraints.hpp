#pragma once

// Strong boundary conditions as row replacement on the residual and on the
// linearized system.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "eulerstab/block_sparse.hpp"
#include "eulerstab/mesh.hpp"

namespace eulerstab {

/// Boundary condition attached to a boundary tag.
///   kDirichlet: all components prescribed from `state`.
///   kCharacteristic: components flagged inflow by classify_inflow(state).
///   kWall: slip, m . n = 0.
///   kOutflow: nothing prescribed.
/// Node precedence when several tags meet: Dirichlet, Characteristic, Wall,
/// Outflow.
struct BoundaryCondition {
  enum class Kind { kDirichlet, kCharacteristic, kWall, kOutflow };
  Kind kind = Kind::kOutflow;
  std::function<State(const Vec2& x, double t)> state;
};

using BoundaryConditions = std::map<std::string, BoundaryCondition>;

struct NodeConstraint {
  int node = -1;
  std::array<bool, kComponents> fixed{};  // component := value
  State value{};
  bool slip = false;  // n . m = 0 in slot `slot`, tangential row in the other
  Vec2 normal{0.0, 0.0};
  int slot = kMomentumX;
};

/// Row replacement data for every constrained node.
class Constraints {
 public:
  Constraints() = default;
  Constraints(int num_nodes, std::vector<NodeConstraint> list);

  /// Adds a Dirichlet constraint on one component. Throws
  /// std::invalid_argument when the node is not on the boundary.
  void fix(const Mesh& mesh, int node, int component, double value);

  const std::vector<NodeConstraint>& list() const { return list_; }
  bool empty() const { return list_.empty(); }

  /// Scalar dofs whose residual row is a constraint equation.
  bool is_constraint_row(int node, int component) const { return row_mask_[node * kComponents + component]; }

  /// Writes prescribed values into U.
  void impose(BlockVector& U) const;

  /// Replaces the constrained residual rows.
  template <class T>
  void apply_residual(const std::vector<StateT<T>>& U, std::vector<StateT<T>>& R) const {
    for (const auto& c : list_) {
      const int i = c.node;
      for (int k = 0; k < kComponents; ++k) {
        if (c.fixed[k]) R[i][k] = U[i][k] - c.value[k];
      }
      if (c.slip) {
        const int other = c.slot == kMomentumX ? kMomentumY : kMomentumX;
        const T tangential = -c.normal[1] * R[i][kMomentumX] + c.normal[0] * R[i][kMomentumY];
        R[i][c.slot] = c.normal[0] * U[i][kMomentumX] + c.normal[1] * U[i][kMomentumY];
        R[i][other] = tangential;
      }
    }
  }

  /// Same row operations on a linearization of the residual.
  void apply_matrix(BlockSparseMatrix& A) const;

 private:
  std::vector<NodeConstraint> list_;
  std::vector<int> index_;  // node -> position in list_ or -1
  std::vector<char> row_mask_;

  void rebuild_mask();
};

/// Builds node constraints from tagged boundary conditions at time t. Wall
/// corners: incident wall normals within 60 degrees are averaged; between 60
/// and 120 degrees both momentum components are set to zero; beyond 120
/// degrees (thin trailing or leading edges) no constraint is applied.
Constraints build_constraints(const Mesh& mesh, const BoundaryConditions& bcs, double t,
                              double gamma = kDefaultGamma);

/// Applies the residual row replacement for a double-valued state.
inline void apply_dirichlet(const Constraints& c, const BlockVector& U, BlockVector& R) {
  c.apply_residual(U, R);
}
inline void apply_dirichlet(const Constraints& c, BlockSparseMatrix& A) { c.apply_matrix(A); }

}  // namespace eulerstab
