#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eulerstab/constraints.hpp"
#include "eulerstab/euler_physics.hpp"
#include "eulerstab/mesh.hpp"
#include "eulerstab/nonlinear_solver.hpp"

namespace eulerstab {

// ---- exact Riemann problem -------------------------------------------------

struct Primitive1D {
  double rho = 0.0;
  double u = 0.0;
  double p = 0.0;
};

struct RiemannSolution {
  Primitive1D left;
  Primitive1D right;
  double gamma = kDefaultGamma;
  double p_star = 0.0;
  double u_star = 0.0;
  bool left_shock = false;
  bool right_shock = false;
  double pressure_residual = 0.0;  // |f(p_star)| of the pressure function

  /// Self-similar state at xi = x / t.
  Primitive1D sample(double xi) const;
};

/// Exact solver: Newton iteration on the star pressure. Throws
/// std::domain_error when the data generate vacuum.
RiemannSolution solve_riemann(const Primitive1D& left, const Primitive1D& right, double gamma = kDefaultGamma);

/// Primitive state (x-velocity only) at xi = x / t.
Primitive exact_riemann(const Primitive& left, const Primitive& right, double xi, double gamma = kDefaultGamma);

// ---- oblique shock -----------------------------------------------------------

struct ObliqueShock {
  double wave_angle_deg = 0.0;   // from the upstream flow direction
  double shock_angle_deg = 0.0;  // from the deflecting wall
  double rho_ratio = 1.0;
  double p_ratio = 1.0;
  double mach2 = 0.0;
};

/// Weak-shock solution of the theta-beta-M relation plus normal-shock
/// ratios. Throws std::domain_error past the detachment angle.
ObliqueShock oblique_shock(double mach1, double deflection_deg, double gamma = kDefaultGamma);

/// tan(theta) from the theta-beta-M relation.
double theta_beta_mach(double beta_rad, double mach1, double gamma = kDefaultGamma);

// ---- error measures ----------------------------------------------------------

/// Sum over cells of the integral of |f_h - f| with 3x3 Gauss quadrature.
double l1_error(const Mesh& mesh, const std::vector<double>& field,
                const std::function<double(const Vec2&)>& exact);

/// Least-squares slope of log(error) against log(h). Throws
/// std::invalid_argument for fewer than two or non-positive entries.
double convergence_rate(const std::vector<double>& errors, const std::vector<double>& h);

// ---- benchmark definitions ---------------------------------------------------

struct MeshRecipe {
  enum class Kind { kStructured, kChannel };
  Kind kind = Kind::kStructured;
  int nx = 1;
  int ny = 1;
  Rect bbox;
  std::vector<Vec2> wall;
  std::vector<Vec2> obstacle;
  double target_h = 0.1;

  Mesh build() const;
};

struct BenchmarkCase {
  std::string name;
  MeshRecipe mesh;
  std::function<State(const Vec2&)> initial;
  std::function<BoundaryConditions()> boundary;
  Stabilization stab;
  SolverConfig solver;
  bool transient = false;
  double dt = 0.0;     // transient: absolute step, or a multiple of h when dt_per_h > 0
  double dt_per_h = 0.0;
  int steps = 0;       // transient with dt_per_h: fixed number of steps
  double t_end = 0.0;
  /// Exact density at (x, t), when known.
  std::function<double(const Vec2&, double)> exact_density;
  /// L1 errors are divided by this (e.g. the strip height for 1D problems).
  double error_scale = 1.0;
};

std::vector<BenchmarkCase> builtin_cases();
/// Throws std::invalid_argument for unknown names.
BenchmarkCase builtin_case(const std::string& name);

/// Reflected-shock region states.
State reflected_region_a(double gamma = kDefaultGamma);
State reflected_region_b(double gamma = kDefaultGamma);
inline constexpr double kReflectedRegionCDensity = 2.687;

/// Compression-corner free stream (M = 2 at -10 degrees to the wall).
State corner_free_stream(double gamma = kDefaultGamma);

std::vector<Vec2> scramjet_wall();
std::vector<Vec2> scramjet_obstacle();

struct CaseResult {
  RunResult run;
  double h = 0.0;
  double l1_density_error = -1.0;  // negative when no exact solution
  double time = 0.0;
  int total_iterations = 0;
  std::vector<double> detector;  // final detector field
};

/// Builds the mesh, runs the case and evaluates the density error.
/// `on_step` is forwarded to the transient driver.
CaseResult run_case(const BenchmarkCase& c,
                    const std::function<void(int, double, const BlockVector&)>& on_step = {});

/// Discretization-level entry point used by run_case.
CaseResult run_case(const BenchmarkCase& c, const Discretization& d,
                    const std::function<void(int, double, const BlockVector&)>& on_step = {});

}  // namespace eulerstab
