#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "eulerstab/io.hpp"

namespace eulerstab {

namespace fs = std::filesystem;

namespace {

std::vector<double> detector_field(const Discretization& d, const BlockVector& U, const Stabilization& stab) {
  DetectorParams dp = stab.detector;
  dp.length_scale = d.mesh.L_char();
  dp.lambda_max_ref = max_wave_speed(U, d.gamma);
  return system_detector(d.mesh, d.geometry, U, stab.components, dp).beta;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  body(out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<IterationRecord> full_history(const RunResult& run) {
  std::vector<IterationRecord> h;
  for (const auto& s : run.steps) h.insert(h.end(), s.history.begin(), s.history.end());
  return h;
}

}  // namespace

int run_from_config(const RunConfig& cfg, std::ostream& log) {
  try {
    const BenchmarkCase c = cfg.to_case();
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    const Discretization d(c.mesh.build());
    log << "case " << c.name << ": " << d.num_nodes() << " nodes, " << d.mesh.num_cells() << " cells\n";

    std::function<void(int, double, const BlockVector&)> on_step;
    if (cfg.write_vtk && cfg.vtk_every > 0 && c.transient) {
      on_step = [&](int step, double t, const BlockVector& U) {
        log << "step " << step << " t = " << format_double(t) << '\n';
        if (step % cfg.vtk_every != 0) return;
        std::ostringstream name;
        name << "solution_" << std::setw(4) << std::setfill('0') << step << ".vtk";
        write_file(dir / name.str(),
                   [&](std::ostream& o) { write_vtk(o, d.mesh, U, detector_field(d, U, c.stab), d.gamma); });
      };
    }

    const CaseResult res = run_case(c, d, on_step);
    const std::vector<IterationRecord> history = full_history(res.run);

    if (cfg.write_vtk) {
      write_file(dir / "solution.vtk", [&](std::ostream& o) { write_vtk(o, d.mesh, res.run.U, res.detector, d.gamma); });
    }
    if (cfg.write_convergence) {
      write_file(dir / "convergence.csv", [&](std::ostream& o) { write_convergence_csv(o, history); });
    }
    if (cfg.write_reference && c.name == "sod") {
      std::vector<double> x;
      for (int i = 0; i <= cfg.nx; ++i) x.push_back(static_cast<double>(i) / cfg.nx);
      write_file(dir / "reference.csv", [&](std::ostream& o) { write_reference_csv(o, x, res.time); });
    }

    const double final_rel = res.run.steps.empty() ? 0.0 : res.run.steps.back().final_rel_residual;
    if (cfg.write_summary) {
      nlohmann::ordered_json j;
      j["case"] = c.name;
      j["status"] = res.run.status;
      j["converged"] = res.run.converged;
      j["steps"] = res.run.steps.size();
      j["iterations"] = res.total_iterations;
      j["final_rel_residual"] = final_rel;
      j["time"] = res.time;
      j["h"] = res.h;
      j["nodes"] = d.num_nodes();
      j["cells"] = d.mesh.num_cells();
      if (res.l1_density_error >= 0.0) {
        j["l1_density_error"] = res.l1_density_error;
      } else {
        j["l1_density_error"] = nullptr;
      }
      write_file(dir / "summary.json", [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    }

    log << "status " << res.run.status << ", " << res.total_iterations << " iterations, final relative residual "
        << format_double(final_rel);
    if (res.l1_density_error >= 0.0) log << ", L1 density error " << format_double(res.l1_density_error);
    log << '\n';
    return res.run.converged ? kExitConverged : kExitNotConverged;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitError;
  }
}

std::vector<SweepPoint> parse_sweep_grid(const std::string& text, const RunConfig& base) {
  std::vector<double> qs{base.q}, epss{base.eps}, sigmas{base.sigma};
  std::vector<bool> diffs{base.differentiable};
  bool any = false;

  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.find_first_not_of(" \t") == std::string::npos) continue;
    const auto eq = group.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep grid: expected name=values, got '" + group + "'");
    std::string key = group.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);

    std::vector<std::string> values;
    std::stringstream vs(group.substr(eq + 1));
    std::string v;
    while (std::getline(vs, v, ',')) {
      v.erase(0, v.find_first_not_of(" \t"));
      v.erase(v.find_last_not_of(" \t") + 1);
      if (v.empty()) throw ConfigError("sweep grid: empty value for '" + key + "'");
      values.push_back(v);
    }
    if (values.empty()) throw ConfigError("sweep grid: no values for '" + key + "'");

    const auto numbers = [&] {
      std::vector<double> out;
      for (const auto& s : values) {
        char* end = nullptr;
        const double x = std::strtod(s.c_str(), &end);
        if (*end != '\0') throw ConfigError("sweep grid: '" + s + "' is not a number");
        out.push_back(x);
      }
      return out;
    };
    if (key == "q") {
      qs = numbers();
    } else if (key == "eps") {
      epss = numbers();
    } else if (key == "sigma") {
      sigmas = numbers();
    } else if (key == "differentiable") {
      diffs.clear();
      for (const auto& s : values) {
        if (s == "1" || s == "true") {
          diffs.push_back(true);
        } else if (s == "0" || s == "false") {
          diffs.push_back(false);
        } else {
          throw ConfigError("sweep grid: '" + s + "' is not a boolean");
        }
      }
    } else {
      throw ConfigError("sweep grid: unknown parameter '" + key + "'");
    }
    any = true;
  }
  if (!any) return {};

  std::vector<SweepPoint> points;
  for (const double q : qs)
    for (const double e : epss)
      for (const double s : sigmas)
        for (const bool df : diffs) points.push_back({q, e, s, df});
  return points;
}

void run_sweep(const RunConfig& base, const std::vector<SweepPoint>& grid, std::ostream& csv, std::ostream& log) {
  csv << "q,eps,sigma,differentiable,iterations,l1_error,converged,status\n";
  for (const auto& p : grid) {
    RunConfig cfg = base;
    cfg.q = p.q;
    cfg.eps = p.eps;
    cfg.sigma = p.sigma;
    cfg.differentiable = p.differentiable;
    csv << format_double(p.q) << ',' << format_double(p.eps) << ',' << format_double(p.sigma) << ','
        << (p.differentiable ? 1 : 0) << ',';
    try {
      const CaseResult res = run_case(cfg.to_case());
      csv << res.total_iterations << ','
          << (res.l1_density_error >= 0.0 ? format_double(res.l1_density_error) : std::string("nan")) << ','
          << (res.run.converged ? 1 : 0) << ',' << res.run.status << '\n';
      log << "q=" << p.q << " eps=" << p.eps << " sigma=" << p.sigma << " diff=" << p.differentiable << ": "
          << res.run.status << ", " << res.total_iterations << " iterations\n";
    } catch (const std::exception& e) {
      std::string msg = e.what();
      for (char& ch : msg) {
        if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
      }
      csv << "0,nan,0,failed: " << msg << '\n';
      log << "q=" << p.q << " eps=" << p.eps << " failed: " << e.what() << '\n';
    }
  }
}

bool run_verify(std::ostream& out) {
  bool all = true;
  const auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    all = all && ok;
  };
  const auto fmt = [](double v) {
    std::ostringstream s;
    s << std::setprecision(8) << v;
    return s.str();
  };

  try {
    // Sod star state against a bisection on the pressure function.
    const RiemannSolution sod = solve_riemann({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1});
    const double g = kDefaultGamma;
    const auto fk = [g](double p, const Primitive1D& s) {
      const double c = std::sqrt(g * s.p / s.rho);
      if (p > s.p) {
        const double A = 2.0 / ((g + 1.0) * s.rho);
        const double B = (g - 1.0) / (g + 1.0) * s.p;
        return (p - s.p) * std::sqrt(A / (p + B));
      }
      return 2.0 * c / (g - 1.0) * (std::pow(p / s.p, (g - 1.0) / (2.0 * g)) - 1.0);
    };
    double lo = 1e-8, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (lo + hi);
      (fk(m, sod.left) + fk(m, sod.right) > 0.0 ? hi : lo) = m;
    }
    const double p_bis = 0.5 * (lo + hi);
    const double u_bis = 0.5 * (fk(p_bis, sod.right) - fk(p_bis, sod.left));
    check("riemann_sod_star", std::abs(sod.p_star - p_bis) < 1e-10 && std::abs(sod.u_star - u_bis) < 1e-10 &&
                                  std::abs(sod.p_star - 0.30313) < 1e-5 && std::abs(sod.u_star - 0.92745) < 1e-5,
          "p* = " + fmt(sod.p_star) + ", u* = " + fmt(sod.u_star));
    check("riemann_pressure_residual", sod.pressure_residual <= 1e-12, fmt(sod.pressure_residual));

    // Mass and momentum flux continuity across the right shock.
    const Primitive1D pre = sod.right;
    const Primitive1D post = sod.sample(sod.u_star + 1e-9);
    const double s = (post.rho * post.u - pre.rho * pre.u) / (post.rho - pre.rho);
    const double momentum = (post.rho * post.u * (post.u - s) + post.p) - (pre.rho * pre.u * (pre.u - s) + pre.p);
    check("riemann_rankine_hugoniot", std::abs(momentum) <= 1e-10, "momentum jump " + fmt(momentum));

    const ObliqueShock os = oblique_shock(2.0, 10.0);
    const double beta = os.wave_angle_deg * std::numbers::pi / 180.0;
    const double identity = theta_beta_mach(beta, 2.0) - std::tan(10.0 * std::numbers::pi / 180.0);
    check("oblique_shock_angle", std::abs(os.shock_angle_deg - 29.3) < 0.05 && std::abs(identity) < 1e-10,
          fmt(os.shock_angle_deg) + " deg from the wall");

    check("convergence_rate", std::abs(convergence_rate({0.1, 0.05}, {1.0, 0.5}) - 1.0) < 1e-12,
          "(0.1, 0.05) over h (1, 0.5)");

    MeshRecipe unit;
    unit.nx = 8;
    unit.ny = 8;
    unit.bbox = {0.0, 1.0, 0.0, 1.0};
    const Mesh m = unit.build();
    const std::vector<double> zero(m.num_nodes(), 0.0);
    const double offset = l1_error(m, zero, [](const Vec2&) { return 0.25; });
    check("l1_error_offset", std::abs(offset - 0.25) < 1e-12, fmt(offset));

    // Jacobian against central differences on a perturbed Sod state.
    BenchmarkCase sc = builtin_case("sod");
    sc.mesh.nx = 12;
    const Discretization d(sc.mesh.build());
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pert(-0.05, 0.05);
    BlockVector U(d.num_nodes());
    for (int i = 0; i < d.num_nodes(); ++i) {
      U[i] = sc.initial(d.mesh.node(i));
      U[i][0] *= 1.0 + pert(rng);
      U[i][1] = 0.1 * pert(rng);
      U[i][3] *= 1.0 + pert(rng);
    }
    Stabilization stab = sc.stab;
    stab.detector.length_scale = d.mesh.L_char();
    stab.detector.lambda_max_ref = max_wave_speed(U, d.gamma);
    const BlockVector U_old = U;
    StepData step;
    step.u_old = &U_old;
    step.dt = 1e-3;
    const BlockSparseMatrix J = jacobian(d, U, step, stab);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      BlockVector v(d.num_nodes());
      for (auto& b : v)
        for (double& x : b) x = pert(rng);
      const double t = 1e-6;
      BlockVector up = U, um = U;
      for (int i = 0; i < d.num_nodes(); ++i)
        for (int c = 0; c < kComponents; ++c) {
          up[i][c] += t * v[i][c];
          um[i][c] -= t * v[i][c];
        }
      const BlockVector rp = stabilized_residual(d, up, step, stab);
      const BlockVector rm = stabilized_residual(d, um, step, stab);
      const BlockVector jv = J.multiply(v);
      double num = 0.0, den = 0.0;
      for (int i = 0; i < d.num_nodes(); ++i)
        for (int c = 0; c < kComponents; ++c) {
          const double fd = (rp[i][c] - rm[i][c]) / (2.0 * t);
          num += (jv[i][c] - fd) * (jv[i][c] - fd);
          den += fd * fd;
        }
      worst = std::max(worst, std::sqrt(num / den));
    }
    check("jacobian_vs_central_differences", worst <= 1e-5, "max relative error " + fmt(worst));

    const std::vector<double> beta_field = detector_field(d, U, stab);
    double bmin = 1.0, bmax = 0.0;
    for (const double b : beta_field) {
      bmin = std::min(bmin, b);
      bmax = std::max(bmax, b);
    }
    check("detector_bounds", bmin >= 0.0 && bmax <= 1.0, "range [" + fmt(bmin) + ", " + fmt(bmax) + "]");
  } catch (const std::exception& e) {
    check("exception", false, e.what());
  }
  return all;
}

}  // namespace eulerstab
