#include "eulerstab/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eulerstab {

double l1_error(const Mesh& mesh, const std::vector<double>& field,
                const std::function<double(const Vec2&)>& exact) {
  const double g = std::sqrt(0.6);
  const std::array<double, 3> pts{-g, 0.0, g};
  const std::array<double, 3> wts{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const std::array<double, 4> rx{-1.0, 1.0, 1.0, -1.0};
  const std::array<double, 4> ry{-1.0, -1.0, 1.0, 1.0};
  double total = 0.0;
  for (int e = 0; e < mesh.num_cells(); ++e) {
    const auto& c = mesh.cell(e);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double xi = pts[a];
        const double eta = pts[b];
        Vec2 x{0.0, 0.0};
        double fh = 0.0;
        double j00 = 0.0, j01 = 0.0, j10 = 0.0, j11 = 0.0;
        for (int k = 0; k < 4; ++k) {
          const double phi = 0.25 * (1.0 + rx[k] * xi) * (1.0 + ry[k] * eta);
          const double dxi = 0.25 * rx[k] * (1.0 + ry[k] * eta);
          const double deta = 0.25 * ry[k] * (1.0 + rx[k] * xi);
          const Vec2& p = mesh.node(c[k]);
          x = x + phi * p;
          fh += phi * field[c[k]];
          j00 += p[0] * dxi;
          j01 += p[0] * deta;
          j10 += p[1] * dxi;
          j11 += p[1] * deta;
        }
        total += wts[a] * wts[b] * (j00 * j11 - j01 * j10) * std::abs(fh - exact(x));
      }
    }
  }
  return total;
}

double convergence_rate(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size() || errors.size() < 2) {
    throw std::invalid_argument("convergence_rate: need at least two (error, h) pairs");
  }
  const std::size_t n = errors.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(errors[k] > 0.0) || !(h[k] > 0.0)) throw std::invalid_argument("convergence_rate: non-positive entry");
    const double x = std::log(h[k]);
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("convergence_rate: all h values are equal");
  return (n * sxy - sx * sy) / den;
}

Mesh MeshRecipe::build() const {
  if (kind == Kind::kChannel) return build_polygonal_channel(wall, obstacle, target_h);
  return build_structured_quad(nx, ny, bbox);
}

State reflected_region_a(double gamma) {
  // Table energies are specific total energies E.
  const double rho = 1.0;
  const Vec2 v{2.9, 0.0};
  const double E = 5.99075;
  const double p = (gamma - 1.0) * rho * (E - 0.5 * dot(v, v));
  return conserved_from_primitive({rho, v, p}, gamma);
}

State reflected_region_b(double gamma) {
  const double rho = 1.7;
  const Vec2 v{2.62, -0.506};
  const double E = 5.8046;
  const double p = (gamma - 1.0) * rho * (E - 0.5 * dot(v, v));
  return conserved_from_primitive({rho, v, p}, gamma);
}

State corner_free_stream(double gamma) {
  const double a = -10.0 * std::numbers::pi / 180.0;
  const double mach = 2.0;
  return conserved_from_primitive({1.0, {std::cos(a), std::sin(a)}, 1.0 / (gamma * mach * mach)}, gamma);
}

std::vector<Vec2> scramjet_wall() {
  return {{0.0, 3.5}, {0.4, 3.5}, {4.9, 2.9}, {12.6, 2.12}, {14.25, 1.92}, {16.9, 1.7}};
}

std::vector<Vec2> scramjet_obstacle() {
  return {{4.9, -1.4}, {8.9, -0.5}, {9.4, -0.5}, {12.6, -1.4}, {14.25, -1.2}};
}

namespace {

BoundaryCondition dirichlet(std::function<State(const Vec2&, double)> f) {
  return {BoundaryCondition::Kind::kDirichlet, std::move(f)};
}
BoundaryCondition characteristic(std::function<State(const Vec2&, double)> f) {
  return {BoundaryCondition::Kind::kCharacteristic, std::move(f)};
}
BoundaryCondition wall() { return {BoundaryCondition::Kind::kWall, {}}; }
BoundaryCondition outflow() { return {BoundaryCondition::Kind::kOutflow, {}}; }

double sinusoid_density(const Vec2& x, double t) {
  const double r = std::hypot(x[0] - 0.5 - t, x[1] - 0.5);
  return r < 0.5 ? 1.0 + 0.9999 * std::cos(2.0 * std::numbers::pi * r) : 1e-4;
}

State sinusoid_state(const Vec2& x, double t) {
  return conserved_from_primitive({sinusoid_density(x, t), {1.0, 0.0}, 1.0});
}

BenchmarkCase sinusoid() {
  BenchmarkCase c;
  c.name = "sinusoid";
  c.mesh.nx = c.mesh.ny = 32;
  c.mesh.bbox = {0.0, 1.0, 0.0, 1.0};
  c.initial = [](const Vec2& x) { return sinusoid_state(x, 0.0); };
  c.boundary = [] {
    BoundaryConditions b;
    for (const char* tag : {"left", "right", "bottom", "top"}) b[tag] = dirichlet(sinusoid_state);
    return b;
  };
  c.stab.detector = {10.0, 1e-4, 1e-2, 1e-10, true};
  c.solver.tol1 = 0.5;
  c.solver.tol2 = 1e-12;
  c.solver.tol_increment = 1e-6;
  c.solver.max_iters = 150;
  c.transient = true;
  c.dt_per_h = 0.02;
  c.steps = 4;
  c.exact_density = sinusoid_density;
  return c;
}

BenchmarkCase compression_corner() {
  BenchmarkCase c;
  c.name = "compression_corner";
  c.mesh.nx = c.mesh.ny = 32;
  c.mesh.bbox = {0.0, 1.0, 0.0, 1.0};
  c.initial = [](const Vec2&) { return corner_free_stream(); };
  c.boundary = [] {
    BoundaryConditions b;
    const auto inflow = dirichlet([](const Vec2&, double) { return corner_free_stream(); });
    b["left"] = inflow;
    b["top"] = inflow;
    b["bottom"] = wall();
    b["right"] = outflow();
    return b;
  };
  c.stab.detector = {10.0, 1e-4, 1e-2, 1e-10, true};
  c.solver.tol1 = 1e-2;
  c.solver.tol2 = 1e-12;
  c.solver.tol_increment = 1e-6;
  c.solver.max_iters = 150;
  const ObliqueShock s = oblique_shock(2.0, 10.0);
  const double slope = std::tan(s.shock_angle_deg * std::numbers::pi / 180.0);
  const double rho2 = s.rho_ratio;
  c.exact_density = [slope, rho2](const Vec2& x, double) { return x[1] < slope * x[0] ? rho2 : 1.0; };
  return c;
}

BenchmarkCase reflected_shock() {
  BenchmarkCase c;
  c.name = "reflected_shock";
  c.mesh.nx = 60;
  c.mesh.ny = 20;
  c.mesh.bbox = {0.0, 4.1, 0.0, 1.0};
  c.initial = [](const Vec2& x) {
    return x[1] >= 1.0 - 1e-12 && x[0] > 0.0 ? reflected_region_b() : reflected_region_a();
  };
  c.boundary = [] {
    BoundaryConditions b;
    b["left"] = dirichlet([](const Vec2&, double) { return reflected_region_a(); });
    b["top"] = characteristic([](const Vec2& x, double) { return x[0] <= 0.0 ? reflected_region_a() : reflected_region_b(); });
    b["bottom"] = wall();
    b["right"] = outflow();
    return b;
  };
  c.stab.detector = {10.0, 1e-4, 1e-2, 1e-10, true};
  c.solver.tol1 = 1e-2;
  c.solver.tol2 = 1e-8;
  c.solver.tol_increment = 1e-6;
  c.solver.max_iters = 150;
  c.solver.continuation = true;
  c.solver.eps_tilde = 1.0;
  return c;
}

BenchmarkCase sod() {
  BenchmarkCase c;
  c.name = "sod";
  c.mesh.nx = 100;
  c.mesh.ny = 1;
  c.mesh.bbox = {0.0, 1.0, 0.0, 0.01};
  c.initial = [](const Vec2& x) {
    return x[0] < 0.5 ? State{1.0, 0.0, 0.0, 2.5} : State{0.125, 0.0, 0.0, 0.25};
  };
  c.boundary = [] {
    BoundaryConditions b;
    for (const char* tag : {"left", "right", "bottom", "top"}) b[tag] = wall();
    return b;
  };
  c.stab.detector = {10.0, 1e-5, 1e-3, 1e-10, true};
  c.solver.tol1 = 5e-3;
  c.solver.tol2 = 1e-6;
  c.solver.tol_increment = 0.0;
  c.solver.max_iters = 150;
  c.transient = true;
  c.dt = 1e-3;
  c.t_end = 0.2;
  c.exact_density = [](const Vec2& x, double t) {
    static const RiemannSolution sol = solve_riemann({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1});
    if (t <= 0.0) return x[0] < 0.5 ? 1.0 : 0.125;
    return sol.sample((x[0] - 0.5) / t).rho;
  };
  c.error_scale = 0.01;
  return c;
}

BenchmarkCase scramjet() {
  BenchmarkCase c;
  c.name = "scramjet";
  c.mesh.kind = MeshRecipe::Kind::kChannel;
  c.mesh.wall = scramjet_wall();
  c.mesh.obstacle = scramjet_obstacle();
  c.mesh.target_h = 0.0655;
  const State inflow = conserved_from_primitive({1.0, {3.0, 0.0}, 1.0 / kDefaultGamma});
  c.initial = [inflow](const Vec2&) { return inflow; };
  c.boundary = [inflow] {
    BoundaryConditions b;
    b["inflow"] = dirichlet([inflow](const Vec2&, double) { return inflow; });
    b["outflow"] = outflow();
    b["wall"] = wall();
    b["obstacle"] = wall();
    return b;
  };
  c.stab.detector = {2.0, 1.0, 100.0, 1e-10, true};
  c.solver.tol1 = 5e-2;
  c.solver.tol2 = 1e-10;
  c.solver.tol_increment = 1e-6;
  c.solver.max_iters = 500;
  c.solver.continuation = true;
  c.solver.eps_tilde = 1.0;
  return c;
}

}  // namespace

std::vector<BenchmarkCase> builtin_cases() {
  return {sinusoid(), compression_corner(), reflected_shock(), sod(), scramjet()};
}

BenchmarkCase builtin_case(const std::string& name) {
  for (auto& c : builtin_cases()) {
    if (c.name == name) return c;
  }
  throw std::invalid_argument("unknown benchmark case '" + name + "'");
}

CaseResult run_case(const BenchmarkCase& c, const std::function<void(int, double, const BlockVector&)>& on_step) {
  const Discretization d(c.mesh.build());
  return run_case(c, d, on_step);
}

CaseResult run_case(const BenchmarkCase& c, const Discretization& d,
                    const std::function<void(int, double, const BlockVector&)>& on_step) {
  CaseResult out;
  for (int i = 0; i < d.num_nodes(); ++i) out.h = std::max(out.h, d.mesh.h_char(i));

  BlockVector U0(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) U0[i] = c.initial(d.mesh.node(i));
  const BoundaryConditions bcs = c.boundary();

  Stabilization stab = c.stab;
  stab.detector.length_scale = d.mesh.L_char();

  if (c.transient) {
    TransientProblem prob;
    prob.disc = &d;
    prob.stab = stab;
    prob.bcs = bcs;
    if (c.dt_per_h > 0.0) {
      prob.dt = c.dt_per_h * out.h;
      prob.t_end = c.steps * prob.dt;
    } else {
      prob.dt = c.dt;
      prob.t_end = c.t_end;
    }
    prob.on_step = on_step;
    out.run = backward_euler_run(std::move(U0), c.solver, prob);
  } else {
    out.run = steady_run(std::move(U0), c.solver, d, stab, bcs);
    if (on_step) on_step(0, 0.0, out.run.U);
  }
  out.time = out.run.time;
  for (const auto& s : out.run.steps) out.total_iterations += s.iterations;

  DetectorParams dp = stab.detector;
  dp.lambda_max_ref = max_wave_speed(out.run.U, d.gamma);
  out.detector = system_detector(d.mesh, d.geometry, out.run.U, stab.components, dp).beta;

  if (c.exact_density) {
    std::vector<double> rho(d.num_nodes());
    for (int i = 0; i < d.num_nodes(); ++i) rho[i] = out.run.U[i][kDensity];
    const double t = out.time;
    out.l1_density_error =
        l1_error(d.mesh, rho, [&](const Vec2& x) { return c.exact_density(x, t); }) / c.error_scale;
  }
  return out;
}

}  // namespace eulerstab
