#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "eulerstab/benchmarks.hpp"

namespace eulerstab {

/// Parse or validation failure; `line` is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Everything needed to reproduce one run. Unset keys in a file take the
/// defaults of the named builtin case.
struct RunConfig {
  std::string case_name = "sod";

  // [mesh]
  int nx = 0;
  int ny = 0;
  double target_h = 0.0;  // channel meshes only

  // [detector]
  double q = 10.0;
  double eps = 1e-4;
  double sigma = 1e-2;
  double zeta = 1e-10;
  bool differentiable = true;

  // [solver]
  double tol1 = 1e-2;
  double tol2 = 1e-10;
  double tol_increment = 1e-6;
  int max_iters = 150;
  bool continuation = false;
  double eps_tilde = 1.0;

  // [time]
  bool transient = false;
  double dt = 0.0;
  double dt_per_h = 0.0;
  int steps = 0;
  double t_end = 0.0;

  // [output]
  std::string output_dir = "output";
  bool write_vtk = true;
  int vtk_every = 0;  // 0: final state only
  bool write_convergence = true;
  bool write_summary = true;
  bool write_reference = true;

  /// Defaults of a builtin case. Throws ConfigError for unknown names.
  static RunConfig for_case(const std::string& name);

  /// Benchmark case with every override applied.
  BenchmarkCase to_case() const;

  bool operator==(const RunConfig&) const = default;
};

/// INI text, sections [case] [mesh] [detector] [solver] [time] [output].
/// Throws ConfigError on syntax errors, unknown sections or keys, and bad values.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);
void write_run_config(std::ostream& out, const RunConfig& cfg);

// ---- output formats ---------------------------------------------------------

/// Legacy ASCII VTK unstructured grid (quads) with point fields density,
/// velocity, pressure, mach and detector.
void write_vtk(std::ostream& out, const Mesh& mesh, const BlockVector& U, const std::vector<double>& detector,
               double gamma = kDefaultGamma);

/// Header plus one row per nonlinear iteration.
void write_convergence_csv(std::ostream& out, const std::vector<IterationRecord>& history);

/// Exact Sod solution sampled at the given abscissae, columns x,rho,u,p.
void write_reference_csv(std::ostream& out, const std::vector<double>& x, double t);

/// Doubles use 17 significant digits everywhere.
std::string format_double(double v);

// ---- drivers ------------------------------------------------------------------

/// Exit codes of the command-line front end.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Runs a configuration and writes the requested artifacts. Returns an exit code.
int run_from_config(const RunConfig& cfg, std::ostream& log);

struct SweepPoint {
  double q = 0.0;
  double eps = 0.0;
  double sigma = 0.0;
  bool differentiable = true;
};

/// Grid string "q=1,2,4;eps=1e-2,1e-3;sigma=1e-1;differentiable=0,1". Missing
/// parameters keep the base value; an empty string gives an empty grid.
std::vector<SweepPoint> parse_sweep_grid(const std::string& text, const RunConfig& base);

/// One CSV row per point: q,eps,sigma,differentiable,iterations,l1_error,converged,status.
void run_sweep(const RunConfig& base, const std::vector<SweepPoint>& grid, std::ostream& csv, std::ostream& log);

/// Oracle self-checks; one PASS/FAIL line each. Returns true when all pass.
bool run_verify(std::ostream& out);

}  // namespace eulerstab
