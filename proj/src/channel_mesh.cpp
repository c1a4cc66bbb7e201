// Block-structured channel meshes built by transfinite interpolation.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "eulerstab/mesh.hpp"

namespace eulerstab {

namespace {

double interp_polyline(const std::vector<Vec2>& line, double x) {
  if (x <= line.front()[0]) return line.front()[1];
  for (std::size_t k = 1; k < line.size(); ++k) {
    if (x <= line[k][0]) {
      const double s = (x - line[k - 1][0]) / (line[k][0] - line[k - 1][0]);
      return (1.0 - s) * line[k - 1][1] + s * line[k][1];
    }
  }
  return line.back()[1];
}

bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
         ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

bool self_intersects(const std::vector<Vec2>& pts, bool closed) {
  const std::size_t n = pts.size();
  const std::size_t segs = closed ? n : n - 1;
  for (std::size_t a = 0; a < segs; ++a) {
    for (std::size_t b = a + 1; b < segs; ++b) {
      if (segments_cross(pts[a], pts[(a + 1) % n], pts[b], pts[(b + 1) % n])) return true;
    }
  }
  return false;
}

/// x stations on [x0, x1] hitting every breakpoint, uniform in between.
std::vector<double> x_stations(std::vector<double> breaks, double h) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> xs{breaks.front()};
  for (std::size_t k = 1; k < breaks.size(); ++k) {
    const double len = breaks[k] - breaks[k - 1];
    const int n = std::max(1, static_cast<int>(std::lround(len / h)));
    for (int i = 1; i < n; ++i) xs.push_back(breaks[k - 1] + len * i / n);
    xs.push_back(breaks[k]);
  }
  return xs;
}

std::vector<double> split(double y0, double y1, int n) {
  std::vector<double> v(n + 1);
  for (int j = 0; j <= n; ++j) v[j] = j == n ? y1 : y0 + (y1 - y0) * j / n;
  return v;
}

std::vector<double> concat(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin() + 1, b.end());
  return a;
}

class Builder {
 public:
  /// Block between the curves y = bottom(x) and y = top(x) over the stations
  /// xs, with vertical side distributions left / right (same node count).
  template <class Bottom, class Top>
  void add_block(const std::vector<double>& xs, Bottom bottom, Top top, const std::vector<double>& left,
                 const std::vector<double>& right) {
    const int nx = static_cast<int>(xs.size()) - 1;
    const int ny = static_cast<int>(left.size()) - 1;
    const double xa = xs.front();
    const double xb = xs.back();
    const double b0 = bottom(xa), b1 = bottom(xb), t0 = top(xa), t1 = top(xb);
    std::vector<int> ids(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int i = 0; i <= nx; ++i) {
      const double x = xs[i];
      const double xi = (x - xa) / (xb - xa);
      const double yb = bottom(x);
      const double yt = top(x);
      for (int j = 0; j <= ny; ++j) {
        double y;
        if (j == 0) {
          y = yb;
        } else if (j == ny) {
          y = yt;
        } else if (i == 0) {
          y = left[j];
        } else if (i == nx) {
          y = right[j];
        } else {
          const double eta_l = (left[j] - b0) / (t0 - b0);
          const double eta_r = (right[j] - b1) / (t1 - b1);
          const double eta = (1.0 - xi) * eta_l + xi * eta_r;
          y = (1.0 - eta) * yb + eta * yt + (1.0 - xi) * (left[j] - ((1.0 - eta) * b0 + eta * t0)) +
              xi * (right[j] - ((1.0 - eta) * b1 + eta * t1));
        }
        ids[i * (ny + 1) + j] = node_id({x, y});
      }
    }
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        cells_.push_back({ids[i * (ny + 1) + j], ids[(i + 1) * (ny + 1) + j],
                          ids[(i + 1) * (ny + 1) + j + 1], ids[i * (ny + 1) + j + 1]});
      }
    }
  }

  /// Reflects every node and cell about y = 0.
  void mirror() {
    const std::size_t nc = cells_.size();
    std::vector<int> image(nodes_.size());
    const std::size_t nn = nodes_.size();
    for (std::size_t k = 0; k < nn; ++k) {
      const Vec2 p = nodes_[k];
      image[k] = node_id({p[0], p[1] == 0.0 ? 0.0 : -p[1]});
    }
    for (std::size_t e = 0; e < nc; ++e) {
      const auto c = cells_[e];
      cells_.push_back({image[c[0]], image[c[3]], image[c[2]], image[c[1]]});
    }
  }

  Mesh finish() { return Mesh(std::move(nodes_), std::move(cells_)); }

 private:
  int node_id(const Vec2& p) {
    const std::pair<long long, long long> key{std::llround(p[0] * 1e9), std::llround(p[1] * 1e9)};
    const auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(p);
    index_.emplace(key, id);
    return id;
  }

  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 4>> cells_;
  std::map<std::pair<long long, long long>, int> index_;
};

int count_for(double length, double h) { return std::max(1, static_cast<int>(std::lround(length / h))); }

double mean_gap(const std::vector<Vec2>& lower, const std::vector<Vec2>& upper, double xa, double xb) {
  constexpr int kSamples = 200;
  double s = 0.0;
  for (int k = 0; k <= kSamples; ++k) {
    const double x = xa + (xb - xa) * k / kSamples;
    s += interp_polyline(upper, x) - interp_polyline(lower, x);
  }
  return s / (kSamples + 1);
}

}  // namespace

Mesh build_polygonal_channel(const std::vector<Vec2>& wall, const std::vector<Vec2>& obstacle,
                             double target_h) {
  if (!(target_h > 0.0)) throw std::invalid_argument("build_polygonal_channel: target_h must be positive");
  if (wall.size() < 2) throw std::invalid_argument("build_polygonal_channel: wall needs two points");
  for (std::size_t k = 0; k < wall.size(); ++k) {
    if (!(wall[k][1] > 0.0)) throw std::invalid_argument("build_polygonal_channel: wall must lie above y = 0");
    if (k > 0 && !(wall[k][0] > wall[k - 1][0])) {
      throw std::invalid_argument("build_polygonal_channel: wall polyline folds back on itself");
    }
  }
  if (self_intersects(wall, false)) throw std::invalid_argument("build_polygonal_channel: wall self-intersects");

  const double x0 = wall.front()[0];
  const double x1 = wall.back()[0];
  const auto y_wall = [&](double x) { return interp_polyline(wall, x); };
  std::vector<double> wall_breaks;
  for (const auto& p : wall) wall_breaks.push_back(p[0]);
  const auto breaks_in = [&](double xa, double xb, std::vector<double> extra) {
    for (double x : wall_breaks) {
      if (x > xa && x < xb) extra.push_back(x);
    }
    extra.push_back(xa);
    extra.push_back(xb);
    return extra;
  };
  const auto zero = [](double) { return 0.0; };

  Builder builder;
  if (obstacle.empty()) {
    const auto xs = x_stations(wall_breaks, target_h);
    const int ny = count_for(mean_gap({{x0, 0.0}, {x1, 0.0}}, wall, x0, x1), target_h);
    builder.add_block(xs, zero, y_wall, split(0.0, y_wall(x0), ny), split(0.0, y_wall(x1), ny));
  } else {
    if (obstacle.size() != 5) {
      throw std::invalid_argument("build_polygonal_channel: obstacle must be the five points A..E");
    }
    // Mirror the lower strut into the upper half.
    std::vector<Vec2> s(5);
    for (int k = 0; k < 5; ++k) s[k] = {obstacle[k][0], -obstacle[k][1]};
    const Vec2 &A = s[0], &B = s[1], &C = s[2], &D = s[3], &E = s[4];
    const std::vector<Vec2> inner{A, B, C, E};
    const std::vector<Vec2> outer{A, D, E};
    if (self_intersects({A, B, C, E, D}, true)) {
      throw std::invalid_argument("build_polygonal_channel: obstacle outline self-intersects");
    }
    const bool ordered = A[0] > x0 && E[0] < x1 && A[0] < B[0] && B[0] <= C[0] && C[0] < E[0] &&
                         A[0] < D[0] && D[0] < E[0];
    if (!ordered) throw std::invalid_argument("build_polygonal_channel: obstacle points out of order");
    for (double x : {B[0], C[0], D[0]}) {
      const double yi = interp_polyline(inner, x);
      const double yo = interp_polyline(outer, x);
      if (!(yi > 0.0) || !(yo > yi) || !(y_wall(x) > yo)) {
        throw std::invalid_argument("build_polygonal_channel: obstacle intersects wall or centerline");
      }
    }
    if (!(A[1] > 0.0 && A[1] < y_wall(A[0]) && E[1] > 0.0 && E[1] < y_wall(E[0]))) {
      throw std::invalid_argument("build_polygonal_channel: obstacle intersects wall or centerline");
    }

    const double xa = A[0];
    const double xe = E[0];
    const int n1 = count_for(mean_gap({{xa, 0.0}, {xe, 0.0}}, inner, xa, xe), target_h);
    const int n2 = count_for(mean_gap(outer, wall, xa, xe), target_h);
    const auto y_in = [&](double x) { return interp_polyline(inner, x); };
    const auto y_out = [&](double x) { return interp_polyline(outer, x); };

    const auto side = [&](double x, double y_split, double y_top_ref) {
      // Split a vertical side in the same proportion as the strut edge.
      const double frac = y_split / y_top_ref;
      const double top = y_wall(x);
      return concat(split(0.0, frac * top, n1), split(frac * top, top, n2));
    };
    const auto at_strut = [&](double x, double y_strut) {
      return concat(split(0.0, y_strut, n1), split(y_strut, y_wall(x), n2));
    };

    const auto xs_up = x_stations(breaks_in(x0, xa, {}), target_h);
    builder.add_block(xs_up, zero, y_wall, side(x0, A[1], y_wall(xa)), at_strut(xa, A[1]));

    const auto xs_mid = x_stations(breaks_in(xa, xe, {B[0], C[0], D[0]}), target_h);
    builder.add_block(xs_mid, zero, y_in, split(0.0, A[1], n1), split(0.0, E[1], n1));
    builder.add_block(xs_mid, y_out, y_wall, split(A[1], y_wall(xa), n2), split(E[1], y_wall(xe), n2));

    const auto xs_down = x_stations(breaks_in(xe, x1, {}), target_h);
    builder.add_block(xs_down, zero, y_wall, at_strut(xe, E[1]), side(x1, E[1], y_wall(xe)));
  }
  builder.mirror();
  Mesh mesh = builder.finish();

  mesh.tag_boundary([&](const Vec2& mid, const Vec2&) -> std::string {
    const double tol = 1e-9 * (x1 - x0);
    if (std::abs(mid[0] - x0) < tol) return "inflow";
    if (std::abs(mid[0] - x1) < tol) return "outflow";
    if (std::abs(std::abs(mid[1]) - y_wall(mid[0])) < 1e-9) return "wall";
    return "obstacle";
  });
  return mesh;
}

}  // namespace eulerstab
