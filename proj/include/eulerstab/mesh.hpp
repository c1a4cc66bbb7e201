#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eulerstab/sparsity.hpp"
#include "eulerstab/types.hpp"

namespace eulerstab {

struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

struct BoundaryEdge {
  int a = -1;
  int b = -1;
  std::string tag;
  Vec2 normal{0.0, 0.0};  // outward unit normal
  double length = 0.0;
};

/// Conforming Q1 quadrilateral mesh. Immutable once tagged; node
/// neighborhoods N(i) include i itself.
class Mesh {
 public:
  Mesh() = default;
  /// Cells are 4 node ids in counterclockwise order. Throws
  /// std::invalid_argument on inverted or degenerate cells.
  Mesh(std::vector<Vec2> nodes, std::vector<std::array<int, 4>> cells);

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  const Vec2& node(int i) const { return nodes_[i]; }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::array<int, 4>& cell(int e) const { return cells_[e]; }
  const std::vector<std::array<int, 4>>& cells() const { return cells_; }

  const SparsityPattern& adjacency() const { return adjacency_; }
  std::span<const int> neighbors(int i) const {
    return {adjacency_.cols.data() + adjacency_.row_ptr[i],
            static_cast<std::size_t>(adjacency_.row_ptr[i + 1] - adjacency_.row_ptr[i])};
  }
  const std::vector<int>& cells_of_node(int i) const { return node_cells_[i]; }

  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  const std::vector<int>& boundary_edges_of_node(int i) const { return node_boundary_edges_[i]; }
  const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }
  bool is_boundary(int i) const { return !node_boundary_edges_[i].empty(); }
  /// Normalized sum of the outward normals of incident boundary edges.
  const Vec2& boundary_normal(int i) const { return node_normals_[i]; }

  /// Longest incident cell edge.
  double h_char(int i) const { return h_char_[i]; }
  /// Bounding-box diagonal.
  double L_char() const { return L_char_; }
  const Rect& bounding_box() const { return bbox_; }
  double cell_area(int e) const;

  /// Assigns a tag to every boundary edge from its midpoint and normal.
  void tag_boundary(const std::function<std::string(const Vec2& midpoint, const Vec2& normal)>& tagger);

 private:
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<std::vector<int>> node_cells_;
  SparsityPattern adjacency_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<std::vector<int>> node_boundary_edges_;
  std::vector<int> boundary_nodes_;
  std::vector<Vec2> node_normals_;
  std::vector<double> h_char_;
  double L_char_ = 0.0;
  Rect bbox_;
};

/// nx * ny cells on a rectangle; boundary tags left/right/bottom/top.
Mesh build_structured_quad(int nx, int ny, const Rect& bbox);

/// Channel symmetric about y = 0. `wall` is the upper wall polyline (x
/// increasing, y > 0), mirrored for the lower wall. `obstacle` is either
/// empty or the five strut points A..E of the lower strut (y < 0): leading
/// edge A, centerline-facing surface A-B-C-E, outer surface A-D-E; the strut
/// is mirrored into the upper half. Tags: inflow (x = x_min), outflow
/// (x = x_max), wall, obstacle.
Mesh build_polygonal_channel(const std::vector<Vec2>& wall, const std::vector<Vec2>& obstacle,
                             double target_h);

/// Symmetric point on the macroelement boundary for one ordered pair (i, j).
/// u_sym = wa * u[a] + wb * u[b]. One-sided pairs (ray leaves the
/// macroelement at x_i) duplicate node j with |r_sym| = |r_ij|.
struct SymmetricPoint {
  int j = -1;
  int a = -1;
  int b = -1;
  double wa = 1.0;
  double wb = 0.0;
  Vec2 r{0.0, 0.0};
  Vec2 r_sym{0.0, 0.0};
  double r_len = 0.0;
  double r_sym_len = 0.0;
  bool one_sided = false;
};

/// Per node i, one entry for each j in N(i) \ {i}, in adjacency order.
class PairGeometry {
 public:
  PairGeometry() = default;
  explicit PairGeometry(const Mesh& mesh);

  std::span<const SymmetricPoint> pairs(int i) const {
    return {points_.data() + offset_[i], static_cast<std::size_t>(offset_[i + 1] - offset_[i])};
  }
  int num_nodes() const { return static_cast<int>(offset_.size()) - 1; }

 private:
  std::vector<int> offset_{0};
  std::vector<SymmetricPoint> points_;
};

inline PairGeometry compute_pair_geometry(const Mesh& mesh) { return PairGeometry(mesh); }

/// Component beta is inflow iff the beta-th eigenvalue of f'(u) . n is <= 0,
/// eigenvalues ordered (v.n, v.n, v.n - c|n|, v.n + c|n|). Throws
/// InadmissibleState for inadmissible boundary states.
std::array<bool, kComponents> classify_inflow(const State& boundary_state, const Vec2& normal,
                                              double gamma = kDefaultGamma);

/// Greedy coloring such that equally colored nodes are at graph distance
/// greater than `distance`.
std::vector<int> distance_coloring(const SparsityPattern& adjacency, int distance);

}  // namespace eulerstab
