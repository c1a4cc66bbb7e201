#include "eulerstab/fe_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "eulerstab/euler_physics.hpp"

namespace eulerstab {

namespace {

constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)
constexpr std::array<double, 4> kRefX{-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kRefY{-1.0, -1.0, 1.0, 1.0};

struct QuadPoint {
  std::array<double, 4> phi;
  std::array<Vec2, 4> grad;  // physical gradients
  Vec2 x;
  double weight;  // includes det J
};

/// Q1 values and physical gradients at the 2x2 Gauss points of cell e.
std::array<QuadPoint, 4> quadrature(const Mesh& mesh, int e) {
  const auto& c = mesh.cell(e);
  std::array<QuadPoint, 4> out;
  int q = 0;
  for (double eta : {-kGauss, kGauss}) {
    for (double xi : {-kGauss, kGauss}) {
      QuadPoint& qp = out[q++];
      std::array<Vec2, 4> dref;
      for (int k = 0; k < 4; ++k) {
        qp.phi[k] = 0.25 * (1.0 + kRefX[k] * xi) * (1.0 + kRefY[k] * eta);
        dref[k] = {0.25 * kRefX[k] * (1.0 + kRefY[k] * eta), 0.25 * kRefY[k] * (1.0 + kRefX[k] * xi)};
      }
      double j00 = 0.0, j01 = 0.0, j10 = 0.0, j11 = 0.0;
      qp.x = {0.0, 0.0};
      for (int k = 0; k < 4; ++k) {
        const Vec2& p = mesh.node(c[k]);
        j00 += p[0] * dref[k][0];
        j01 += p[0] * dref[k][1];
        j10 += p[1] * dref[k][0];
        j11 += p[1] * dref[k][1];
        qp.x = qp.x + qp.phi[k] * p;
      }
      const double det = j00 * j11 - j01 * j10;
      if (!(det > 0.0)) throw std::invalid_argument("cell " + std::to_string(e) + " has a degenerate Jacobian");
      for (int k = 0; k < 4; ++k) {
        // grad = J^{-T} dref
        qp.grad[k] = {(j11 * dref[k][0] - j10 * dref[k][1]) / det,
                      (-j01 * dref[k][0] + j00 * dref[k][1]) / det};
      }
      qp.weight = det;
    }
  }
  return out;
}

}  // namespace

CVectors assemble_cvectors(const Mesh& mesh) {
  const auto& pat = mesh.adjacency();
  CVectors cv;
  cv.elemental.resize(mesh.num_cells());
  cv.global.assign(pat.nnz(), Vec2{0.0, 0.0});
  cv.pairs.assign(pat.nnz(), PairCells{});
  for (int e = 0; e < mesh.num_cells(); ++e) {
    auto& ce = cv.elemental[e];
    for (auto& row : ce) row.fill(Vec2{0.0, 0.0});
    for (const auto& qp : quadrature(mesh, e)) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) ce[a][b] = ce[a][b] + (qp.weight * qp.phi[a]) * qp.grad[b];
      }
    }
    const auto& c = mesh.cell(e);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const int p = pat.find(c[a], c[b]);
        cv.global[p] = cv.global[p] + ce[a][b];
        if (a == b) continue;
        PairCells& pc = cv.pairs[p];
        if (pc.count == 2) throw std::invalid_argument("mesh: edge shared by more than two cells");
        pc.c_ij[pc.count] = ce[a][b];
        pc.c_ji[pc.count] = ce[b][a];
        ++pc.count;
      }
    }
  }
  return cv;
}

MassMatrix assemble_mass(const Mesh& mesh) {
  const auto& pat = mesh.adjacency();
  MassMatrix m;
  m.elemental.resize(mesh.num_cells());
  m.consistent.assign(pat.nnz(), 0.0);
  m.lumped.assign(mesh.num_nodes(), 0.0);
  for (int e = 0; e < mesh.num_cells(); ++e) {
    auto& me = m.elemental[e];
    for (auto& row : me) row.fill(0.0);
    for (const auto& qp : quadrature(mesh, e)) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) me[a][b] += qp.weight * qp.phi[a] * qp.phi[b];
      }
    }
    const auto& c = mesh.cell(e);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        m.consistent[pat.find(c[a], c[b])] += me[a][b];
        m.lumped[c[a]] += me[a][b];
      }
    }
  }
  return m;
}

BlockSparseMatrix assemble_mass_consistent(const Mesh& mesh) {
  const MassMatrix m = assemble_mass(mesh);
  BlockSparseMatrix M(std::make_shared<const SparsityPattern>(mesh.adjacency()));
  for (int p = 0; p < mesh.adjacency().nnz(); ++p) M.at(p) = identity_block(m.consistent[p]);
  return M;
}

std::vector<double> assemble_mass_lumped(const Mesh& mesh) { return assemble_mass(mesh).lumped; }

BlockVector assemble_forcing(const Mesh& mesh, const std::function<State(const Vec2&)>& g) {
  BlockVector G(mesh.num_nodes(), State{});
  for (int e = 0; e < mesh.num_cells(); ++e) {
    const auto& c = mesh.cell(e);
    for (const auto& qp : quadrature(mesh, e)) {
      const State gv = g(qp.x);
      for (int a = 0; a < 4; ++a) {
        for (int k = 0; k < kComponents; ++k) G[c[a]][k] += qp.weight * qp.phi[a] * gv[k];
      }
    }
  }
  return G;
}

BlockVector galerkin_residual(const Mesh& mesh, const CVectors& cvec, const BlockVector& U,
                              const BlockVector& G, double gamma) {
  const int n = mesh.num_nodes();
  std::vector<std::array<State, kDim>> f(n);
  for (int i = 0; i < n; ++i) {
    check_admissible(U[i], i, gamma);
    f[i] = flux(U[i], gamma);
  }
  const auto& pat = mesh.adjacency();
  BlockVector R(n, State{});
  for (int i = 0; i < n; ++i) {
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      const int j = pat.cols[p];
      const Vec2& c = cvec.global[p];
      for (int k = 0; k < kComponents; ++k) R[i][k] += c[0] * f[j][0][k] + c[1] * f[j][1][k];
    }
    if (!G.empty()) {
      for (int k = 0; k < kComponents; ++k) R[i][k] -= G[i][k];
    }
  }
  return R;
}

BlockSparseMatrix assemble_K_blocks(const Mesh& mesh, const CVectors& cvec, const BlockVector& U,
                                    double gamma) {
  const auto& pat = mesh.adjacency();
  BlockSparseMatrix K(std::make_shared<const SparsityPattern>(pat));
  for (int i = 0; i < mesh.num_nodes(); ++i) check_admissible(U[i], i, gamma);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      K.at(p) = flux_jacobian(U[pat.cols[p]], cvec.global[p], gamma);
    }
  }
  return K;
}

Discretization::Discretization(Mesh m, double gamma_in)
    : mesh(std::move(m)),
      gamma(gamma_in),
      geometry(mesh),
      cvec(assemble_cvectors(mesh)),
      mass(assemble_mass(mesh)),
      pattern(std::make_shared<const SparsityPattern>(mesh.adjacency())) {
  jacobian_pattern = std::make_shared<const SparsityPattern>(pattern->squared());
  const int n = mesh.num_nodes();
  transpose.assign(pattern->nnz(), -1);
  diagonal.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int p = pattern->row_ptr[i]; p < pattern->row_ptr[i + 1]; ++p) {
      const int j = pattern->cols[p];
      transpose[p] = pattern->find(j, i);
      if (j == i) diagonal[i] = p;
    }
  }
  color = distance_coloring(*pattern, 4);
  for (int c : color) num_colors = std::max(num_colors, c + 1);
}

}  // namespace eulerstab
