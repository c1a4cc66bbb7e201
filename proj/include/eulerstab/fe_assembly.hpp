#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "eulerstab/block_sparse.hpp"
#include "eulerstab/mesh.hpp"

namespace eulerstab {

/// Elemental pieces of one adjacency pair: c^e_ij and c^e_ji for every cell
/// holding both nodes (at most two in a conforming quad mesh).
struct PairCells {
  int count = 0;
  std::array<Vec2, 2> c_ij{};
  std::array<Vec2, 2> c_ji{};
};

/// c^e_ab = integral over e of phi_a grad(phi_b) for local nodes (a, b), and
/// the assembled c_ij aligned with the mesh adjacency.
struct CVectors {
  std::vector<std::array<std::array<Vec2, 4>, 4>> elemental;
  std::vector<Vec2> global;
  std::vector<PairCells> pairs;  // aligned with adjacency; diagonal entries empty
};

/// Scalar mass entries; consistent is aligned with the mesh adjacency.
struct MassMatrix {
  std::vector<std::array<std::array<double, 4>, 4>> elemental;
  std::vector<double> consistent;
  std::vector<double> lumped;
};

CVectors assemble_cvectors(const Mesh& mesh);
MassMatrix assemble_mass(const Mesh& mesh);

/// Block form (phi_j, phi_i) I over the mesh adjacency.
BlockSparseMatrix assemble_mass_consistent(const Mesh& mesh);
std::vector<double> assemble_mass_lumped(const Mesh& mesh);

/// G_i = (g, phi_i) with 2x2 Gauss quadrature.
BlockVector assemble_forcing(const Mesh& mesh, const std::function<State(const Vec2&)>& g);

/// R*_i = sum_j c_ij . f(u_j) - G_i (flux weak form with the boundary term
/// folded back in). Empty G means zero forcing.
BlockVector galerkin_residual(const Mesh& mesh, const CVectors& cvec, const BlockVector& U,
                              const BlockVector& G = {}, double gamma = kDefaultGamma);

/// K_ij = f'(u_j) . c_ij, so that K(U) U = R*(U) + G.
BlockSparseMatrix assemble_K_blocks(const Mesh& mesh, const CVectors& cvec, const BlockVector& U,
                                    double gamma = kDefaultGamma);

/// Everything that depends on the mesh only, computed once per run.
struct Discretization {
  explicit Discretization(Mesh m, double gamma_in = kDefaultGamma);

  Mesh mesh;
  double gamma;
  PairGeometry geometry;
  CVectors cvec;
  MassMatrix mass;
  std::shared_ptr<const SparsityPattern> pattern;          // node adjacency
  std::shared_ptr<const SparsityPattern> jacobian_pattern;  // adjacency squared
  std::vector<int> transpose;                              // position of (j, i) for (i, j)
  std::vector<int> diagonal;                               // position of (i, i)
  std::vector<int> color;                                  // distance-4 coloring
  int num_colors = 0;

  int num_nodes() const { return mesh.num_nodes(); }
};

}  // namespace eulerstab
