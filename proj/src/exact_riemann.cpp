// Exact Riemann solver for the 1D Euler equations (ideal gas), following the
// classical two-wave pressure-function formulation.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eulerstab/benchmarks.hpp"

namespace eulerstab {

namespace {

struct WaveFunction {
  double f;
  double df;
};

WaveFunction pressure_branch(double p, const Primitive1D& s, double gamma) {
  const double c = std::sqrt(gamma * s.p / s.rho);
  if (p > s.p) {
    const double a = 2.0 / ((gamma + 1.0) * s.rho);
    const double b = (gamma - 1.0) / (gamma + 1.0) * s.p;
    const double q = std::sqrt(a / (p + b));
    return {(p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (b + p))};
  }
  const double r = p / s.p;
  const double e = (gamma - 1.0) / (2.0 * gamma);
  return {2.0 * c / (gamma - 1.0) * (std::pow(r, e) - 1.0), std::pow(r, -(gamma + 1.0) / (2.0 * gamma)) / (s.rho * c)};
}

}  // namespace

RiemannSolution solve_riemann(const Primitive1D& left, const Primitive1D& right, double gamma) {
  if (!(left.rho > 0.0 && left.p > 0.0 && right.rho > 0.0 && right.p > 0.0)) {
    throw std::domain_error("exact_riemann: non-positive density or pressure");
  }
  const double cl = std::sqrt(gamma * left.p / left.rho);
  const double cr = std::sqrt(gamma * right.p / right.rho);
  const double du = right.u - left.u;
  if (2.0 * (cl + cr) / (gamma - 1.0) <= du) throw std::domain_error("exact_riemann: vacuum is generated");

  RiemannSolution sol;
  sol.left = left;
  sol.right = right;
  sol.gamma = gamma;

  // Primitive-variable linearization as the starting guess.
  const double pvrs = 0.5 * (left.p + right.p) - 0.125 * du * (left.rho + right.rho) * (cl + cr);
  double p = std::max(1e-8 * std::min(left.p, right.p), pvrs);
  for (int it = 0; it < 100; ++it) {
    const WaveFunction fl = pressure_branch(p, left, gamma);
    const WaveFunction fr = pressure_branch(p, right, gamma);
    const double f = fl.f + fr.f + du;
    double p_new = p - f / (fl.df + fr.df);
    if (p_new <= 0.0) p_new = 0.5 * p;
    const double change = 2.0 * std::abs(p_new - p) / (p_new + p);
    p = p_new;
    if (change < 1e-15) break;
  }
  const WaveFunction fl = pressure_branch(p, left, gamma);
  const WaveFunction fr = pressure_branch(p, right, gamma);
  sol.p_star = p;
  sol.u_star = 0.5 * (left.u + right.u) + 0.5 * (fr.f - fl.f);
  sol.pressure_residual = std::abs(fl.f + fr.f + du);
  sol.left_shock = p > left.p;
  sol.right_shock = p > right.p;
  return sol;
}

Primitive1D RiemannSolution::sample(double xi) const {
  const double g = gamma;
  const double gm = (g - 1.0) / (g + 1.0);
  if (xi <= u_star) {
    const Primitive1D& s = left;
    const double c = std::sqrt(g * s.p / s.rho);
    if (left_shock) {
      const double pr = p_star / s.p;
      const double speed = s.u - c * std::sqrt((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g));
      if (xi <= speed) return s;
      return {s.rho * (pr + gm) / (gm * pr + 1.0), u_star, p_star};
    }
    const double head = s.u - c;
    const double c_star = c * std::pow(p_star / s.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star - c_star;
    if (xi <= head) return s;
    if (xi >= tail) return {s.rho * std::pow(p_star / s.p, 1.0 / g), u_star, p_star};
    const double cf = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * (s.u - xi));
    const double uf = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * s.u + xi);
    const double rho = s.rho * std::pow(cf / c, 2.0 / (g - 1.0));
    return {rho, uf, s.p * std::pow(cf / c, 2.0 * g / (g - 1.0))};
  }
  const Primitive1D& s = right;
  const double c = std::sqrt(g * s.p / s.rho);
  if (right_shock) {
    const double pr = p_star / s.p;
    const double speed = s.u + c * std::sqrt((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g));
    if (xi >= speed) return s;
    return {s.rho * (pr + gm) / (gm * pr + 1.0), u_star, p_star};
  }
  const double head = s.u + c;
  const double c_star = c * std::pow(p_star / s.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star + c_star;
  if (xi >= head) return s;
  if (xi <= tail) return {s.rho * std::pow(p_star / s.p, 1.0 / g), u_star, p_star};
  const double cf = 2.0 / (g + 1.0) * (c - 0.5 * (g - 1.0) * (s.u - xi));
  const double uf = 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * s.u + xi);
  const double rho = s.rho * std::pow(cf / c, 2.0 / (g - 1.0));
  return {rho, uf, s.p * std::pow(cf / c, 2.0 * g / (g - 1.0))};
}

Primitive exact_riemann(const Primitive& left, const Primitive& right, double xi, double gamma) {
  const RiemannSolution sol =
      solve_riemann({left.rho, left.vel[0], left.p}, {right.rho, right.vel[0], right.p}, gamma);
  const Primitive1D s = sol.sample(xi);
  return {s.rho, {s.u, 0.0}, s.p};
}

}  // namespace eulerstab
