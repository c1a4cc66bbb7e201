#include "eulerstab/constraints.hpp"

#include "eulerstab/euler_physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eulerstab {

Constraints::Constraints(int num_nodes, std::vector<NodeConstraint> list)
    : list_(std::move(list)), index_(num_nodes, -1) {
  for (std::size_t k = 0; k < list_.size(); ++k) index_[list_[k].node] = static_cast<int>(k);
  rebuild_mask();
}

void Constraints::rebuild_mask() {
  row_mask_.assign(index_.size() * kComponents, 0);
  for (const auto& c : list_) {
    for (int k = 0; k < kComponents; ++k) {
      if (c.fixed[k]) row_mask_[c.node * kComponents + k] = 1;
    }
    if (c.slip) row_mask_[c.node * kComponents + c.slot] = 1;
  }
}

void Constraints::fix(const Mesh& mesh, int node, int component, double value) {
  if (node < 0 || node >= mesh.num_nodes() || !mesh.is_boundary(node)) {
    throw std::invalid_argument("boundary condition on non-boundary node " + std::to_string(node));
  }
  if (index_.empty()) index_.assign(mesh.num_nodes(), -1);
  if (index_[node] < 0) {
    index_[node] = static_cast<int>(list_.size());
    list_.push_back(NodeConstraint{});
    list_.back().node = node;
  }
  NodeConstraint& c = list_[index_[node]];
  c.fixed[component] = true;
  c.value[component] = value;
  if (c.slip && (component == kMomentumX || component == kMomentumY)) c.slip = false;
  rebuild_mask();
}

void Constraints::impose(BlockVector& U) const {
  for (const auto& c : list_) {
    State& u = U[c.node];
    for (int k = 0; k < kComponents; ++k) {
      if (c.fixed[k]) u[k] = c.value[k];
    }
    if (c.slip) {
      const double mn = c.normal[0] * u[kMomentumX] + c.normal[1] * u[kMomentumY];
      const double ke_before = kinetic_energy(u);
      u[kMomentumX] -= mn * c.normal[0];
      u[kMomentumY] -= mn * c.normal[1];
      // Keep the internal energy when the normal momentum is removed.
      u[kEnergy] -= ke_before - kinetic_energy(u);
    }
  }
}

void Constraints::apply_matrix(BlockSparseMatrix& A) const {
  const auto& pat = A.pattern();
  for (const auto& c : list_) {
    const int i = c.node;
    const int other = c.slot == kMomentumX ? kMomentumY : kMomentumX;
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      Block& b = A.at(p);
      const bool diag = pat.cols[p] == i;
      for (int k = 0; k < kComponents; ++k) {
        if (!c.fixed[k]) continue;
        for (int col = 0; col < kComponents; ++col) b[k * kComponents + col] = (diag && col == k) ? 1.0 : 0.0;
      }
      if (c.slip) {
        for (int col = 0; col < kComponents; ++col) {
          const double t = -c.normal[1] * b[kMomentumX * kComponents + col] +
                           c.normal[0] * b[kMomentumY * kComponents + col];
          b[other * kComponents + col] = t;
          b[c.slot * kComponents + col] = 0.0;
        }
        if (diag) {
          b[c.slot * kComponents + kMomentumX] = c.normal[0];
          b[c.slot * kComponents + kMomentumY] = c.normal[1];
        }
      }
    }
  }
}

Constraints build_constraints(const Mesh& mesh, const BoundaryConditions& bcs, double t, double gamma) {
  using Kind = BoundaryCondition::Kind;
  std::vector<NodeConstraint> list;
  for (int i : mesh.boundary_nodes()) {
    const BoundaryCondition* dirichlet = nullptr;
    const BoundaryCondition* characteristic = nullptr;
    Vec2 char_normal{0.0, 0.0};
    std::vector<Vec2> wall_normals;
    for (int k : mesh.boundary_edges_of_node(i)) {
      const BoundaryEdge& be = mesh.boundary_edges()[k];
      const auto it = bcs.find(be.tag);
      if (it == bcs.end()) throw std::invalid_argument("no boundary condition for tag '" + be.tag + "'");
      switch (it->second.kind) {
        case Kind::kDirichlet:
          dirichlet = &it->second;
          break;
        case Kind::kCharacteristic:
          characteristic = &it->second;
          char_normal = char_normal + be.normal;
          break;
        case Kind::kWall:
          wall_normals.push_back(be.normal);
          break;
        case Kind::kOutflow:
          break;
      }
    }

    NodeConstraint c;
    c.node = i;
    if (dirichlet != nullptr) {
      c.value = dirichlet->state(mesh.node(i), t);
      c.fixed.fill(true);
      list.push_back(c);
      continue;
    }
    if (characteristic != nullptr) {
      c.value = characteristic->state(mesh.node(i), t);
      const double len = norm(char_normal);
      const Vec2 n = len > 0.0 ? (1.0 / len) * char_normal : mesh.boundary_normal(i);
      c.fixed = classify_inflow(c.value, n, gamma);
      bool any = false;
      for (bool f : c.fixed) any = any || f;
      if (any) {
        list.push_back(c);
        continue;
      }
    }
    if (wall_normals.empty()) continue;

    double min_cos = 1.0;
    Vec2 sum{0.0, 0.0};
    for (std::size_t a = 0; a < wall_normals.size(); ++a) {
      sum = sum + wall_normals[a];
      for (std::size_t b = a + 1; b < wall_normals.size(); ++b) {
        min_cos = std::min(min_cos, dot(wall_normals[a], wall_normals[b]));
      }
    }
    if (min_cos < -0.5) continue;
    if (min_cos < 0.5) {
      c.fixed[kMomentumX] = c.fixed[kMomentumY] = true;
      list.push_back(c);
      continue;
    }
    const double len = norm(sum);
    c.slip = true;
    c.normal = (1.0 / len) * sum;
    c.slot = std::abs(c.normal[0]) >= std::abs(c.normal[1]) ? kMomentumX : kMomentumY;
    list.push_back(c);
  }
  return Constraints(mesh.num_nodes(), std::move(list));
}

}  // namespace eulerstab
