#include "eulerstab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "eulerstab/euler_physics.hpp"

namespace eulerstab {

namespace {

constexpr double kRayTol = 1e-10;
constexpr double kVertexTol = 1e-10;

}  // namespace

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<std::array<int, 4>> cells)
    : nodes_(std::move(nodes)), cells_(std::move(cells)) {
  const int n = num_nodes();
  if (n == 0 || cells_.empty()) throw std::invalid_argument("mesh: empty node or cell list");

  node_cells_.assign(n, {});
  std::vector<std::vector<int>> rows(n);
  std::map<std::pair<int, int>, std::pair<int, std::pair<int, int>>> edges;  // key -> count, oriented
  h_char_.assign(n, 0.0);

  for (int e = 0; e < num_cells(); ++e) {
    const auto& c = cells_[e];
    for (int k = 0; k < 4; ++k) {
      if (c[k] < 0 || c[k] >= n) throw std::invalid_argument("mesh: cell references unknown node");
    }
    for (int k = 0; k < 4; ++k) {
      const Vec2& p = nodes_[c[k]];
      const Vec2& next = nodes_[c[(k + 1) % 4]];
      const Vec2& prev = nodes_[c[(k + 3) % 4]];
      if (!(cross(next - p, prev - p) > 0.0)) {
        throw std::invalid_argument("mesh: cell " + std::to_string(e) +
                                    " is inverted or degenerate");
      }
    }
    for (int k = 0; k < 4; ++k) {
      node_cells_[c[k]].push_back(e);
      for (int l = 0; l < 4; ++l) rows[c[k]].push_back(c[l]);
      const int a = c[k];
      const int b = c[(k + 1) % 4];
      const double len = norm(nodes_[b] - nodes_[a]);
      h_char_[a] = std::max(h_char_[a], len);
      h_char_[b] = std::max(h_char_[b], len);
      auto& entry = edges[{std::min(a, b), std::max(a, b)}];
      entry.first += 1;
      entry.second = {a, b};
    }
  }
  adjacency_ = SparsityPattern::from_rows(rows);

  node_boundary_edges_.assign(n, {});
  for (const auto& [key, entry] : edges) {
    if (entry.first != 1) continue;
    const auto [a, b] = entry.second;
    const Vec2 d = nodes_[b] - nodes_[a];
    const double len = norm(d);
    BoundaryEdge be;
    be.a = a;
    be.b = b;
    be.length = len;
    be.normal = {d[1] / len, -d[0] / len};
    node_boundary_edges_[a].push_back(static_cast<int>(boundary_edges_.size()));
    node_boundary_edges_[b].push_back(static_cast<int>(boundary_edges_.size()));
    boundary_edges_.push_back(be);
  }

  node_normals_.assign(n, Vec2{0.0, 0.0});
  for (int i = 0; i < n; ++i) {
    if (node_boundary_edges_[i].empty()) continue;
    boundary_nodes_.push_back(i);
    Vec2 s{0.0, 0.0};
    for (int k : node_boundary_edges_[i]) s = s + boundary_edges_[k].normal;
    const double len = norm(s);
    // Opposite normals (zero-thickness cusp) keep the first edge normal.
    node_normals_[i] = len > 1e-12 ? (1.0 / len) * s : boundary_edges_[node_boundary_edges_[i][0]].normal;
  }

  bbox_ = {std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
           std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  for (const auto& p : nodes_) {
    bbox_.x0 = std::min(bbox_.x0, p[0]);
    bbox_.x1 = std::max(bbox_.x1, p[0]);
    bbox_.y0 = std::min(bbox_.y0, p[1]);
    bbox_.y1 = std::max(bbox_.y1, p[1]);
  }
  L_char_ = std::hypot(bbox_.x1 - bbox_.x0, bbox_.y1 - bbox_.y0);
}

double Mesh::cell_area(int e) const {
  const auto& c = cells_[e];
  double a = 0.0;
  for (int k = 0; k < 4; ++k) a += cross(nodes_[c[k]], nodes_[c[(k + 1) % 4]]);
  return 0.5 * a;
}

void Mesh::tag_boundary(
    const std::function<std::string(const Vec2& midpoint, const Vec2& normal)>& tagger) {
  for (auto& be : boundary_edges_) {
    const Vec2 mid = 0.5 * (nodes_[be.a] + nodes_[be.b]);
    be.tag = tagger(mid, be.normal);
  }
}

Mesh build_structured_quad(int nx, int ny, const Rect& bbox) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_structured_quad: nx and ny must be >= 1");
  if (!(bbox.x1 > bbox.x0) || !(bbox.y1 > bbox.y0)) {
    throw std::invalid_argument("build_structured_quad: degenerate bounding box");
  }
  std::vector<Vec2> nodes;
  nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = j == ny ? bbox.y1 : bbox.y0 + (bbox.y1 - bbox.y0) * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? bbox.x1 : bbox.x0 + (bbox.x1 - bbox.x0) * i / nx;
      nodes.push_back({x, y});
    }
  }
  std::vector<std::array<int, 4>> cells;
  cells.reserve(static_cast<std::size_t>(nx) * ny);
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  }
  Mesh mesh(std::move(nodes), std::move(cells));
  mesh.tag_boundary([](const Vec2&, const Vec2& n) -> std::string {
    if (n[0] < -0.5) return "left";
    if (n[0] > 0.5) return "right";
    if (n[1] < -0.5) return "bottom";
    return "top";
  });
  return mesh;
}

PairGeometry::PairGeometry(const Mesh& mesh) {
  const int n = mesh.num_nodes();
  offset_.assign(1, 0);
  offset_.reserve(n + 1);
  points_.reserve(mesh.adjacency().nnz());

  for (int i = 0; i < n; ++i) {
    // Boundary of the macroelement: cell edges that appear once among the
    // cells around i.
    std::map<std::pair<int, int>, std::pair<int, std::pair<int, int>>> count;
    for (int e : mesh.cells_of_node(i)) {
      const auto& c = mesh.cell(e);
      for (int k = 0; k < 4; ++k) {
        const int a = c[k];
        const int b = c[(k + 1) % 4];
        auto& entry = count[{std::min(a, b), std::max(a, b)}];
        entry.first += 1;
        entry.second = {a, b};
      }
    }
    std::vector<std::pair<int, int>> ring;
    for (const auto& [key, entry] : count) {
      if (entry.first == 1) ring.push_back(entry.second);
    }

    const Vec2& xi = mesh.node(i);
    for (int j : mesh.neighbors(i)) {
      if (j == i) continue;
      SymmetricPoint sp;
      sp.j = j;
      sp.r = mesh.node(j) - xi;
      sp.r_len = norm(sp.r);
      const Vec2 d = xi - mesh.node(j);

      double best_t = std::numeric_limits<double>::infinity();
      for (const auto& [a, b] : ring) {
        const Vec2& pa = mesh.node(a);
        const Vec2 e = mesh.node(b) - pa;
        const double den = cross(d, e);
        if (std::abs(den) <= 1e-14 * norm(d) * norm(e)) continue;
        const Vec2 w = pa - xi;
        const double t = cross(w, e) / den;
        const double s = cross(w, d) / den;
        if (!(t > kRayTol) || s < -kVertexTol || s > 1.0 + kVertexTol || t >= best_t) continue;
        best_t = t;
        if (s <= kVertexTol) {
          sp.a = a; sp.b = b; sp.wa = 1.0; sp.wb = 0.0;
        } else if (s >= 1.0 - kVertexTol) {
          sp.a = b; sp.b = a; sp.wa = 1.0; sp.wb = 0.0;
        } else {
          sp.a = a; sp.b = b; sp.wa = 1.0 - s; sp.wb = s;
        }
      }

      if (sp.a < 0) {
        sp.a = j;
        sp.b = j;
        sp.wa = 1.0;
        sp.wb = 0.0;
        sp.r_sym = sp.r;
        sp.r_sym_len = sp.r_len;
        sp.one_sided = true;
      } else {
        const Vec2 xs = sp.wa * mesh.node(sp.a) + sp.wb * mesh.node(sp.b);
        sp.r_sym = xs - xi;
        sp.r_sym_len = norm(sp.r_sym);
      }
      points_.push_back(sp);
    }
    offset_.push_back(static_cast<int>(points_.size()));
  }
}

std::array<bool, kComponents> classify_inflow(const State& boundary_state, const Vec2& normal,
                                              double gamma) {
  check_admissible(boundary_state, -1, gamma);
  const double vn = (boundary_state[1] * normal[0] + boundary_state[2] * normal[1]) / boundary_state[0];
  const double cn = sound_speed(boundary_state, gamma) * norm(normal);
  const std::array<double, kComponents> lam{vn, vn, vn - cn, vn + cn};
  std::array<bool, kComponents> inflow{};
  for (int k = 0; k < kComponents; ++k) inflow[k] = lam[k] <= 0.0;
  return inflow;
}

std::vector<int> distance_coloring(const SparsityPattern& adjacency, int distance) {
  const int n = adjacency.rows();
  std::vector<int> color(n, -1);
  std::vector<int> depth(n, -1);
  std::vector<int> touched;
  std::vector<char> used;
  std::deque<int> queue;
  for (int i = 0; i < n; ++i) {
    touched.clear();
    queue.clear();
    depth[i] = 0;
    touched.push_back(i);
    queue.push_back(i);
    used.assign(used.size(), 0);
    while (!queue.empty()) {
      const int k = queue.front();
      queue.pop_front();
      if (color[k] >= 0) {
        if (color[k] >= static_cast<int>(used.size())) used.resize(color[k] + 1, 0);
        used[color[k]] = 1;
      }
      if (depth[k] == distance) continue;
      for (int p = adjacency.row_ptr[k]; p < adjacency.row_ptr[k + 1]; ++p) {
        const int m = adjacency.cols[p];
        if (depth[m] >= 0) continue;
        depth[m] = depth[k] + 1;
        touched.push_back(m);
        queue.push_back(m);
      }
    }
    int c = 0;
    while (c < static_cast<int>(used.size()) && used[c]) ++c;
    color[i] = c;
    if (c >= static_cast<int>(used.size())) used.resize(c + 1, 0);
    for (int k : touched) depth[k] = -1;
  }
  return color;
}

}  // namespace eulerstab
