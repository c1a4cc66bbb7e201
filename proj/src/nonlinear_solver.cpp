#include "eulerstab/nonlinear_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "eulerstab/dual.hpp"
#include "eulerstab/linear_solver.hpp"

namespace eulerstab {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kRejectedStep = 1e-8;
constexpr double kDampedStep = 1e-3;

int thread_count() {
  const char* env = std::getenv("EULERSTAB_NUM_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

double vector_norm(const BlockVector& v) {
  double s = 0.0;
  for (const State& x : v) {
    for (double c : x) s += c * c;
  }
  return std::sqrt(s);
}

}  // namespace

int SolveReport::iterations_to(double target) const {
  if (initial_residual == 0.0) return 0;
  for (const auto& rec : history) {
    if (rec.rel_residual <= target) return rec.iter;
  }
  return -1;
}

double free_norm(const BlockVector& R, const Constraints* constraints) {
  double s = 0.0;
  for (std::size_t i = 0; i < R.size(); ++i) {
    for (int k = 0; k < kComponents; ++k) {
      if (constraints != nullptr && !constraints->empty() &&
          constraints->is_constraint_row(static_cast<int>(i), k)) {
        continue;
      }
      s += R[i][k] * R[i][k];
    }
  }
  return std::sqrt(s);
}

BlockSparseMatrix picard_matrix(const Discretization& d, const BlockVector& U, const StepData& step,
                                const Stabilization& stab) {
  const auto& pat = *d.pattern;
  BlockSparseMatrix A(d.pattern);
  for (int i = 0; i < d.num_nodes(); ++i) check_admissible(U[i], i, d.gamma);
  const std::vector<double> ones(d.num_nodes(), 1.0);
  const std::vector<double> nu = pair_diffusion(d, U, ones, stab.detector);
  for (int i = 0; i < d.num_nodes(); ++i) {
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      A.at(p) = flux_jacobian(U[pat.cols[p]], d.cvec.global[p], d.gamma);
    }
  }
  for (int i = 0; i < d.num_nodes(); ++i) {
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      const int j = pat.cols[p];
      if (j == i) continue;
      for (int k = 0; k < kComponents; ++k) {
        A.at(p)[k * kComponents + k] -= nu[p];
        A.at(d.diagonal[i])[k * kComponents + k] += nu[p];
      }
    }
    if (step.u_old != nullptr) A.add_scaled_identity(i, i, d.mass.lumped[i] / step.dt);
  }
  if (step.constraints != nullptr) step.constraints->apply_matrix(A);
  return A;
}

BlockSparseMatrix jacobian(const Discretization& d, const BlockVector& U, const StepData& step,
                           const Stabilization& stab) {
  using D = Dual<kComponents>;
  const int n = d.num_nodes();
  const auto& jp = *d.jacobian_pattern;
  BlockSparseMatrix J(d.jacobian_pattern);

  std::vector<std::vector<int>> members(d.num_colors);
  for (int i = 0; i < n; ++i) members[d.color[i]].push_back(i);

  const auto sweep = [&](int first, int stride) {
    std::vector<StateT<D>> Ud(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < kComponents; ++k) Ud[i][k] = D(U[i][k]);
    }
    for (int c = first; c < d.num_colors; c += stride) {
      for (int i : members[c]) {
        for (int k = 0; k < kComponents; ++k) Ud[i][k].d[k] = 1.0;
      }
      const std::vector<StateT<D>> R = stabilized_residual_t<D>(d, Ud, step, stab);
      for (int i : members[c]) {
        for (int k = 0; k < kComponents; ++k) Ud[i][k].d[k] = 0.0;
      }
      for (int i = 0; i < n; ++i) {
        for (int p = jp.row_ptr[i]; p < jp.row_ptr[i + 1]; ++p) {
          if (d.color[jp.cols[p]] != c) continue;
          Block& b = J.at(p);
          for (int r = 0; r < kComponents; ++r) {
            for (int k = 0; k < kComponents; ++k) b[r * kComponents + k] = R[i][r].d[k];
          }
        }
      }
    }
  };

  const int threads = std::min(thread_count(), std::max(1, d.num_colors));
  if (threads == 1) {
    sweep(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          sweep(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return J;
}

LineSearchResult golden_section_linesearch(const std::function<double(double)>& phi, double phi0,
                                           double lambda_max, int iterations) {
  for (int shrink = 0; shrink <= 10; ++shrink) {
    LineSearchResult best{0.0, phi0, 0};
    bool any_finite = false;
    const auto sample = [&](double l) {
      const double v = phi(l);
      ++best.evaluations;
      if (std::isfinite(v)) any_finite = true;
      if (v < best.value) {
        best.value = v;
        best.lambda = l;
      }
      return v;
    };
    double a = 0.0;
    double b = lambda_max;
    double c = b - kGolden * (b - a);
    double e = a + kGolden * (b - a);
    double fc = sample(c);
    double fe = sample(e);
    for (int it = 0; it < iterations; ++it) {
      if (fc < fe || (std::isinf(fc) && std::isinf(fe))) {
        b = e;
        e = c;
        fe = fc;
        c = b - kGolden * (b - a);
        fc = sample(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + kGolden * (b - a);
        fe = sample(e);
      }
    }
    if (lambda_max >= 1.0) sample(1.0);
    if (any_finite) return best;
    lambda_max *= 0.5;
  }
  throw std::runtime_error("line search: every sampled step is inadmissible");
}

SolveReport hybrid_solve(BlockVector& U, const SolverConfig& config, const Discretization& d,
                         const Stabilization& stab, const StepData& step, int step_index) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  const auto finish = [&](const std::string& status, bool converged) {
    report.status = status;
    report.converged = converged;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };
  const Constraints* cons = step.constraints;
  if (cons != nullptr) cons->impose(U);

  Stabilization cur = stab;
  double eps_k = stab.detector.eps;
  const auto set_eps = [&](double e) {
    eps_k = e;
    if (config.continuation) {
      cur.detector.eps = e;
      cur.detector.sigma = config.sigma_to_eps * e;
    }
  };
  if (config.continuation) set_eps(config.eps_tilde);

  const auto residual = [&](const BlockVector& V) { return stabilized_residual(d, V, step, cur); };
  const auto galerkin_norm = [&](const BlockVector& V) {
    return free_norm(galerkin_residual(d.mesh, d.cvec, V, step.forcing ? *step.forcing : BlockVector{}, d.gamma),
                     cons);
  };

  BlockVector R;
  double r0 = 0.0;
  double g0 = 0.0;
  try {
    cur.detector.lambda_max_ref = max_wave_speed(U, d.gamma);
    R = residual(U);
    r0 = free_norm(R, cons);
    g0 = galerkin_norm(U);
  } catch (const InadmissibleState& e) {
    return finish(std::string("inadmissible: ") + e.what(), false);
  }
  report.initial_residual = r0;
  if (r0 == 0.0) return finish("converged", true);

  double r_cur = r0;
  double rel = 1.0;
  double best_rel = 1.0;
  BlockVector best = U;
  Phase phase = config.tol1 >= 1.0 ? Phase::kNewton : Phase::kPicard;
  int rejected = 0;
  int slow_picard = 0;
  LinearSolver picard_solver;
  LinearSolver newton_solver;

  for (int k = 1; k <= config.max_iters; ++k) {
    if (phase == Phase::kPicard && rel < config.tol1) phase = Phase::kNewton;

    BlockVector dU;
    try {
      BlockVector rhs = R;
      for (auto& x : rhs) {
        for (double& c : x) c = -c;
      }
      if (phase == Phase::kPicard) {
        dU = picard_solver.solve(picard_matrix(d, U, step, cur), rhs);
      } else {
        dU = newton_solver.solve(jacobian(d, U, step, cur), rhs);
      }
    } catch (const std::runtime_error& e) {
      U = best;
      report.final_rel_residual = best_rel;
      return finish(std::string("linear_solver: ") + e.what(), false);
    }

    BlockVector trial(U.size());
    const auto phi = [&](double lambda) {
      for (std::size_t i = 0; i < U.size(); ++i) {
        for (int c = 0; c < kComponents; ++c) trial[i][c] = U[i][c] + lambda * dU[i][c];
      }
      try {
        return free_norm(residual(trial), cons);
      } catch (const InadmissibleState&) {
        return std::numeric_limits<double>::infinity();
      }
    };

    LineSearchResult ls;
    try {
      ls = golden_section_linesearch(phi, r_cur, config.linesearch_max, config.linesearch_iters);
    } catch (const std::runtime_error& e) {
      U = best;
      report.final_rel_residual = best_rel;
      return finish(std::string("inadmissible: ") + e.what(), false);
    }

    double lambda = ls.lambda;
    double r_new = ls.value;
    bool stagnated = false;
    if (lambda < kRejectedStep) {
      ++rejected;
      const double v = phi(kDampedStep);
      if (v <= r_cur) {
        lambda = kDampedStep;
        r_new = v;
      } else {
        lambda = 0.0;
        r_new = r_cur;
      }
      stagnated = rejected >= 2;
    } else {
      rejected = 0;
    }
    if (!(r_new <= r_cur)) throw std::logic_error("line search increased the residual");

    for (std::size_t i = 0; i < U.size(); ++i) {
      for (int c = 0; c < kComponents; ++c) U[i][c] += lambda * dU[i][c];
    }
    const double inc = vector_norm(dU) / std::max(vector_norm(U), 1e-300);

    try {
      cur.detector.lambda_max_ref = max_wave_speed(U, d.gamma);
      if (config.continuation) set_eps(continuation_update(config.eps_tilde, r_new, r0));
      R = residual(U);
    } catch (const InadmissibleState& e) {
      U = best;
      report.final_rel_residual = best_rel;
      return finish(std::string("inadmissible: ") + e.what(), false);
    }
    const double r_prev = r_cur;
    r_cur = free_norm(R, cons);
    rel = r_cur / r0;

    IterationRecord rec;
    rec.step = step_index;
    rec.iter = k;
    rec.phase = phase;
    rec.rel_residual = rel;
    rec.rel_galerkin_residual = g0 > 0.0 ? galerkin_norm(U) / g0 : 0.0;
    rec.rel_increment = inc;
    rec.lambda = lambda;
    rec.eps_k = eps_k;
    report.history.push_back(rec);
    report.iterations = k;
    report.final_rel_residual = rel;

    if (rel < best_rel) {
      best_rel = rel;
      best = U;
    }
    if (!std::isfinite(rel) || rel > config.divergence_factor * best_rel) {
      U = best;
      report.final_rel_residual = best_rel;
      return finish("diverged", false);
    }
    if (rel < config.tol2) return finish("converged", true);
    if (phase == Phase::kNewton && inc < config.tol_increment) {
      return finish("converged", true);
    }
    if (phase == Phase::kPicard) {
      slow_picard = r_cur > (1.0 - config.picard_min_reduction) * r_prev ? slow_picard + 1 : 0;
      if (slow_picard >= 2) stagnated = true;
    }
    if (stagnated && phase == Phase::kPicard) {
      phase = Phase::kNewton;
      rejected = 0;
      continue;
    }
    if (stagnated) {
      U = best;
      report.final_rel_residual = best_rel;
      return finish("stagnation", false);
    }
  }
  U = best;
  report.final_rel_residual = best_rel;
  return finish("max_iters", false);
}

RunResult backward_euler_run(BlockVector U0, const SolverConfig& config, const TransientProblem& problem) {
  if (!(problem.dt > 0.0)) throw std::invalid_argument("backward_euler_run: dt must be positive");
  const Discretization& d = *problem.disc;
  RunResult res;
  res.U = std::move(U0);
  const int steps = std::max(1, static_cast<int>(std::ceil(problem.t_end / problem.dt - 1e-9)));
  double t = 0.0;
  for (int s = 1; s <= steps; ++s) {
    const double dt = std::min(problem.dt, problem.t_end - t);
    const double t_new = s == steps ? problem.t_end : t + dt;
    const Constraints cons = build_constraints(d.mesh, problem.bcs, t_new, d.gamma);
    const BlockVector u_old = res.U;
    StepData step;
    step.u_old = &u_old;
    step.dt = t_new - t;
    step.forcing = &problem.forcing;
    step.constraints = &cons;
    SolveReport rep = hybrid_solve(res.U, config, d, problem.stab, step, s);
    const bool failed = rep.status != "converged" && rep.status != "max_iters" && rep.status != "stagnation";
    if (!rep.converged) res.converged = false;
    res.steps.push_back(std::move(rep));
    if (failed) {
      res.status = res.steps.back().status;
      res.U = u_old;
      return res;
    }
    t = t_new;
    res.time = t;
    if (problem.on_step) problem.on_step(s, t, res.U);
  }
  res.status = res.converged ? "converged" : "not_converged";
  return res;
}

RunResult steady_run(BlockVector U0, const SolverConfig& config, const Discretization& d,
                     const Stabilization& stab, const BoundaryConditions& bcs, const BlockVector& forcing) {
  RunResult res;
  res.U = std::move(U0);
  const Constraints cons = build_constraints(d.mesh, bcs, 0.0, d.gamma);
  StepData step;
  step.forcing = &forcing;
  step.constraints = &cons;
  SolveReport rep = hybrid_solve(res.U, config, d, stab, step, 0);
  res.converged = rep.converged;
  res.status = rep.status;
  res.steps.push_back(std::move(rep));
  return res;
}

}  // namespace eulerstab
