#pragma once

// Pointwise ideal-gas Euler physics: EOS, fluxes, flux Jacobians, Roe mean
// values and the (regularized) spectral radius of directional Jacobians.

#include <array>
#include <cmath>

#include "eulerstab/smooth_functions.hpp"
#include "eulerstab/types.hpp"

namespace eulerstab {

struct Primitive {
  double rho = 0.0;
  Vec2 vel{0.0, 0.0};
  double p = 0.0;
};

template <class T>
T kinetic_energy(const StateT<T>& u) {
  return (u[1] * u[1] + u[2] * u[2]) / (2.0 * u[0]);
}

template <class T>
T pressure(const StateT<T>& u, double gamma = kDefaultGamma) {
  return (gamma - 1.0) * (u[3] - kinetic_energy(u));
}

inline bool is_admissible(const State& u, double gamma = kDefaultGamma) {
  return u[0] > 0.0 && pressure(u, gamma) > 0.0 && std::isfinite(u[1]) && std::isfinite(u[2]);
}

/// Throws InadmissibleState when rho <= 0 or p <= 0.
inline void check_admissible(const State& u, int node = -1, double gamma = kDefaultGamma) {
  if (!(u[0] > 0.0)) throw InadmissibleState("non-positive density", node, u[0]);
  const double p = pressure(u, gamma);
  if (!(p > 0.0)) throw InadmissibleState("non-positive pressure", node, p);
}

inline Primitive primitive_from_conserved(const State& u, double gamma = kDefaultGamma) {
  check_admissible(u, -1, gamma);
  return {u[0], {u[1] / u[0], u[2] / u[0]}, pressure(u, gamma)};
}

inline State conserved_from_primitive(const Primitive& w, double gamma = kDefaultGamma) {
  if (!(w.rho > 0.0)) throw InadmissibleState("non-positive density", -1, w.rho);
  if (!(w.p > 0.0)) throw InadmissibleState("non-positive pressure", -1, w.p);
  const double ke = 0.5 * w.rho * (w.vel[0] * w.vel[0] + w.vel[1] * w.vel[1]);
  return {w.rho, w.rho * w.vel[0], w.rho * w.vel[1], w.p / (gamma - 1.0) + ke};
}

inline double sound_speed(const State& u, double gamma = kDefaultGamma) {
  return std::sqrt(gamma * pressure(u, gamma) / u[0]);
}

/// Physical flux columns {f_x, f_y}.
template <class T>
std::array<StateT<T>, kDim> flux(const StateT<T>& u, double gamma = kDefaultGamma) {
  const T vx = u[1] / u[0];
  const T vy = u[2] / u[0];
  const T p = pressure(u, gamma);
  const T ep = u[3] + p;
  return {StateT<T>{u[1], u[1] * vx + p, u[2] * vx, vx * ep},
          StateT<T>{u[2], u[1] * vy, u[2] * vy + p, vy * ep}};
}

/// f'(u) . dir = sum_k dir_k A_k(u), row-major.
inline Block flux_jacobian(const State& u, const Vec2& dir, double gamma = kDefaultGamma) {
  const double g1 = gamma - 1.0;
  const double vx = u[1] / u[0];
  const double vy = u[2] / u[0];
  const double q2 = vx * vx + vy * vy;
  const double h = (u[3] + pressure(u, gamma)) / u[0];
  const double nx = dir[0];
  const double ny = dir[1];
  const double vn = vx * nx + vy * ny;
  const double phi = 0.5 * g1 * q2;
  return Block{0.0,
               nx,
               ny,
               0.0,
               phi * nx - vx * vn,
               vn + vx * nx - g1 * vx * nx,
               vx * ny - g1 * vy * nx,
               g1 * nx,
               phi * ny - vy * vn,
               vy * nx - g1 * vx * ny,
               vn + vy * ny - g1 * vy * ny,
               g1 * ny,
               (phi - h) * vn,
               h * nx - g1 * vx * vn,
               h * ny - g1 * vy * vn,
               gamma * vn};
}

template <class T>
struct RoeAverageT {
  T rho;
  std::array<T, kDim> mom;
  T rhoE;
  T enthalpy;
  T sound_speed;
  std::array<T, kDim> vel;
};
using RoeAverage = RoeAverageT<double>;

/// Roe mean values of two admissible states. Symmetric in its arguments and
/// consistent (equal inputs reproduce the input state).
template <class T>
RoeAverageT<T> roe_average(const StateT<T>& ui, const StateT<T>& uj, double gamma = kDefaultGamma) {
  using std::sqrt;
  const T si = sqrt(ui[0]);
  const T sj = sqrt(uj[0]);
  const T inv = 1.0 / (si + sj);
  const T hi = (ui[3] + pressure(ui, gamma)) / ui[0];
  const T hj = (uj[3] + pressure(uj, gamma)) / uj[0];

  RoeAverageT<T> avg;
  avg.rho = si * sj;
  avg.mom = {(ui[1] * sj + uj[1] * si) * inv, (ui[2] * sj + uj[2] * si) * inv};
  avg.enthalpy = (hi * si + hj * sj) * inv;
  avg.vel = {avg.mom[0] / avg.rho, avg.mom[1] / avg.rho};
  const T half_q2 = 0.5 * (avg.vel[0] * avg.vel[0] + avg.vel[1] * avg.vel[1]);
  const T c2 = (gamma - 1.0) * (avg.enthalpy - half_q2);
  if (!(value_of(c2) > 0.0)) {
    throw InadmissibleState("non-positive Roe-averaged sound speed", -1, value_of(c2));
  }
  avg.sound_speed = sqrt(c2);
  avg.rhoE = (avg.rho * avg.enthalpy + (gamma - 1.0) * avg.rho * half_q2) / gamma;
  return avg;
}

inline State roe_state(const RoeAverage& avg) {
  return {avg.rho, avg.mom[0], avg.mom[1], avg.rhoE};
}

/// Eigenvalues of f'(u_roe) . c_vec: (v.c, v.c, v.c - c_s|c|, v.c + c_s|c|).
inline std::array<double, kComponents> wave_speeds(const RoeAverage& avg, const Vec2& c_vec) {
  const double vc = avg.vel[0] * c_vec[0] + avg.vel[1] * c_vec[1];
  const double cn = avg.sound_speed * norm(c_vec);
  return {vc, vc, vc - cn, vc + cn};
}

/// |v.c|_up + c_s |c|; exact spectral radius for eps_h = 0.
template <class T>
T spectral_radius(const RoeAverageT<T>& avg, const Vec2& c_vec, double eps_h) {
  const T vc = avg.vel[0] * c_vec[0] + avg.vel[1] * c_vec[1];
  return smooth_abs_up(vc, eps_h) + avg.sound_speed * norm(c_vec);
}

}  // namespace eulerstab
