#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace eulerstab {

inline constexpr int kDim = 2;
inline constexpr int kComponents = kDim + 2;
inline constexpr double kDefaultGamma = 1.4;

enum Component : int { kDensity = 0, kMomentumX = 1, kMomentumY = 2, kEnergy = 3 };

using Vec2 = std::array<double, 2>;

/// Conserved variables (rho, m_x, m_y, rhoE) at one node, generic over the
/// scalar so the same kernels run on doubles and on dual numbers.
template <class T>
using StateT = std::array<T, kComponents>;
using State = StateT<double>;
using BlockVector = std::vector<State>;

/// Row-major 4x4 block.
using Block = std::array<double, kComponents * kComponents>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

/// Raised when a state has non-positive density or pressure (or a Roe average
/// has a non-positive sound speed). Carries the offending node when known.
class InadmissibleState : public std::runtime_error {
 public:
  InadmissibleState(const std::string& what, int node = -1, double value = 0.0)
      : std::runtime_error(what + (node >= 0 ? " (node " + std::to_string(node) + ", value " +
                                                   std::to_string(value) + ")"
                                             : std::string())),
        node_(node),
        value_(value) {}

  int node() const { return node_; }
  double value() const { return value_; }

 private:
  int node_;
  double value_;
};

}  // namespace eulerstab
