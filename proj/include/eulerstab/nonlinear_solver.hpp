#pragma once

#include <functional>
#include <string>
#include <vector>

#include "eulerstab/block_sparse.hpp"
#include "eulerstab/constraints.hpp"
#include "eulerstab/stabilization.hpp"

namespace eulerstab {

struct SolverConfig {
  double tol1 = 1e-2;           // Picard -> Newton switch on ||R|| / ||R0||
  double tol2 = 1e-10;          // final relative residual
  double tol_increment = 1e-6;  // ||lambda dU|| / ||U||, Newton phase only
  int max_iters = 150;
  bool continuation = false;
  double eps_tilde = 1.0;
  double sigma_to_eps = 100.0;
  double linesearch_max = 2.0;
  int linesearch_iters = 20;
  double divergence_factor = 1e6;
  // Picard hands over to Newton after two consecutive iterations that
  // reduce ||R|| by less than this fraction.
  double picard_min_reduction = 1e-2;
};

enum class Phase { kPicard, kNewton };

inline const char* phase_name(Phase p) { return p == Phase::kPicard ? "picard" : "newton"; }

struct IterationRecord {
  int step = 0;
  int iter = 0;
  Phase phase = Phase::kPicard;
  double rel_residual = 0.0;
  double rel_galerkin_residual = 0.0;
  double rel_increment = 0.0;
  double lambda = 0.0;
  double eps_k = 0.0;
};

struct SolveReport {
  std::vector<IterationRecord> history;
  int iterations = 0;
  bool converged = false;
  double initial_residual = 0.0;
  double final_rel_residual = 0.0;
  double wall_time = 0.0;
  std::string status;

  /// First iteration count at which ||R|| / ||R0|| <= target, or -1.
  int iterations_to(double target) const;
};

/// Euclidean norm over the rows that are not constraint equations.
double free_norm(const BlockVector& R, const Constraints* constraints);

/// M_L / dt + K(U) + B(U) with every detector set to one, constrained rows
/// replaced. Steady mode omits the mass term.
BlockSparseMatrix picard_matrix(const Discretization& d, const BlockVector& U, const StepData& step,
                                const Stabilization& stab);

/// Exact derivative of the stabilized residual (constrained rows included),
/// by forward-mode differentiation seeded per distance-4 color. Color sweeps
/// run on EULERSTAB_NUM_THREADS threads (default 1).
BlockSparseMatrix jacobian(const Discretization& d, const BlockVector& U, const StepData& step,
                           const Stabilization& stab);

struct LineSearchResult {
  double lambda = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section minimization of phi on [0, lambda_max]; phi returns +inf
/// for inadmissible steps. The returned point is the best sampled one
/// (lambda = 1 is always sampled); lambda = 0 means no sampled point beat
/// phi0. When every sample is inadmissible the bracket is halved, up to ten
/// times, then std::runtime_error.
LineSearchResult golden_section_linesearch(const std::function<double(double)>& phi, double phi0,
                                           double lambda_max = 2.0, int iterations = 20);

/// eps^k = eps_tilde ||R^k|| / ||R^0||.
inline double continuation_update(double eps_tilde, double rk_norm, double r0_norm) {
  return eps_tilde * rk_norm / r0_norm;
}

/// Picard iterations until tol1, then Newton, both with line search, and
/// optional continuation of eps (sigma = sigma_to_eps * eps, zeta fixed).
/// U is updated in place (best iterate when not converged).
SolveReport hybrid_solve(BlockVector& U, const SolverConfig& config, const Discretization& d,
                         const Stabilization& stab, const StepData& step, int step_index = 0);

struct TransientProblem {
  const Discretization* disc = nullptr;
  Stabilization stab;
  BoundaryConditions bcs;
  BlockVector forcing;
  double dt = 0.0;
  double t_end = 0.0;
  /// Called after every accepted step with (step, time, state).
  std::function<void(int, double, const BlockVector&)> on_step;
};

struct RunResult {
  BlockVector U;
  std::vector<SolveReport> steps;
  bool converged = true;
  double time = 0.0;
  std::string status;
};

/// Backward Euler from U0 at t = 0 to t_end; the last step is clipped. The
/// run stops at the first step whose nonlinear solve fails.
RunResult backward_euler_run(BlockVector U0, const SolverConfig& config, const TransientProblem& problem);

/// Steady solve with boundary conditions evaluated at t = 0.
RunResult steady_run(BlockVector U0, const SolverConfig& config, const Discretization& d,
                     const Stabilization& stab, const BoundaryConditions& bcs, const BlockVector& forcing = {});

}  // namespace eulerstab
