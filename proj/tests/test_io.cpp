#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "eulerstab/io.hpp"
#include "test_util.hpp"

using namespace eulerstab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("eulerstab_test_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig small_sod(const fs::path& dir) {
  RunConfig c = RunConfig::for_case("sod");
  c.nx = 20;
  c.dt = 0.005;
  c.t_end = 0.05;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST(Config, RoundTripIsIdentity) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::string> cases{"sinusoid", "compression_corner", "reflected_shock", "sod", "scramjet"};
  for (int k = 0; k < 200; ++k) {
    RunConfig c = RunConfig::for_case(cases[k % cases.size()]);
    c.nx = 1 + static_cast<int>(rng() % 200);
    c.ny = 1 + static_cast<int>(rng() % 200);
    c.target_h = u(rng);
    c.q = 0.5 + 12.0 * u(rng);
    c.eps = std::pow(10.0, -6.0 * u(rng));
    c.sigma = u(rng) / 3.0;
    c.zeta = 1e-10 * u(rng);
    c.differentiable = rng() % 2;
    c.tol1 = u(rng) + 1e-3;
    c.tol2 = 1e-12 + u(rng) * 1e-6;
    c.tol_increment = u(rng) * 1e-5;
    c.max_iters = 1 + static_cast<int>(rng() % 500);
    c.continuation = rng() % 2;
    c.eps_tilde = 0.1 + u(rng);
    c.transient = rng() % 2;
    c.dt = 1e-3 + u(rng);
    c.dt_per_h = u(rng);
    c.steps = 1 + static_cast<int>(rng() % 50);
    c.t_end = 1.0 + u(rng);
    c.output_dir = "out/run_" + std::to_string(k);
    c.write_vtk = rng() % 2;
    c.vtk_every = static_cast<int>(rng() % 10);
    c.write_convergence = rng() % 2;
    c.write_summary = rng() % 2;
    c.write_reference = rng() % 2;
    std::ostringstream out;
    write_run_config(out, c);
    EXPECT_EQ(parse(out.str()), c) << out.str();
  }
}

TEST(Config, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> e(-300.0, 300.0);
  for (int k = 0; k < 1000; ++k) {
    const double v = std::pow(10.0, e(rng)) * (k % 2 ? -1.0 : 1.0);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Config, MissingKeysTakeCaseDefaults) {
  const RunConfig c = parse("[case]\nname = reflected_shock\n[detector]\nq = 5\n");
  RunConfig expected = RunConfig::for_case("reflected_shock");
  expected.q = 5.0;
  EXPECT_EQ(c, expected);
  const BenchmarkCase bc = c.to_case();
  EXPECT_EQ(bc.stab.detector.q, 5.0);
  EXPECT_EQ(bc.mesh.nx, expected.nx);
}

TEST(Config, RejectsInvalidInput) {
  EXPECT_THROW(parse("[case]\nname = sod\n[mesh]\nsize = 3\n"), ConfigError);
  EXPECT_THROW(parse("[case]\nname = sod\n[extra]\nq = 3\n"), ConfigError);
  EXPECT_THROW(parse("[case]\nname = sod\n[detector]\nq = abc\n"), ConfigError);
  EXPECT_THROW(parse("[case]\nname = sod\n[solver]\ncontinuation = maybe\n"), ConfigError);
  EXPECT_THROW(parse("[case]\nname = sod\n[mesh]\nnx = -4\n"), ConfigError);
  EXPECT_THROW(parse("[case]\nname = sod\n[time]\nmode = sometimes\n"), ConfigError);
  EXPECT_THROW(parse("[mesh]\nnx = 4\n"), ConfigError);
  EXPECT_THROW(parse("[case]\nname = unknown\n"), ConfigError);
  EXPECT_THROW(parse("q = 3\n[case]\nname = sod\n"), ConfigError);
  EXPECT_THROW(load_run_config("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, SyntaxErrorsReportLine) {
  try {
    parse("[case]\nname = sod\n\n[mesh\nnx = 3\n");
    FAIL() << "no exception";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Sweep, GridIsCartesianProduct) {
  const RunConfig base = RunConfig::for_case("sod");
  const auto g = parse_sweep_grid("q=1,2,4,6,8,10,12; eps=1e-2,1e-3,1e-4,1e-5", base);
  EXPECT_EQ(g.size(), 28u);
  for (const auto& p : g) {
    EXPECT_EQ(p.sigma, base.sigma);
    EXPECT_EQ(p.differentiable, base.differentiable);
  }
  EXPECT_EQ(g.front().q, 1.0);
  EXPECT_EQ(g.front().eps, 1e-2);
  EXPECT_EQ(g.back().q, 12.0);
  EXPECT_EQ(g.back().eps, 1e-5);
  EXPECT_EQ(parse_sweep_grid("differentiable=0,1", base).size(), 2u);
  EXPECT_TRUE(parse_sweep_grid("", base).empty());
  EXPECT_THROW(parse_sweep_grid("r=1", base), ConfigError);
  EXPECT_THROW(parse_sweep_grid("q=1,x", base), ConfigError);
  EXPECT_THROW(parse_sweep_grid("q", base), ConfigError);
}

TEST(Sweep, EmptyGridWritesHeaderOnly) {
  std::ostringstream csv, log;
  run_sweep(RunConfig::for_case("sod"), {}, csv, log);
  EXPECT_EQ(csv.str(), "q,eps,sigma,differentiable,iterations,l1_error,converged,status\n");
}

TEST(Sweep, SinglePointMatchesRunAndFailuresAreMarked) {
  const fs::path dir = scratch_dir("sweep");
  const RunConfig base = small_sod(dir);
  std::ostringstream log;
  ASSERT_EQ(run_from_config(base, log), kExitConverged);
  const std::string summary = slurp(dir / "summary.json");

  std::ostringstream csv;
  run_sweep(base, {{base.q, base.eps, base.sigma, base.differentiable}, {base.q, base.eps, base.sigma, base.differentiable}},
            csv, log);
  std::istringstream rows(csv.str());
  std::string header, row1, row2;
  std::getline(rows, header);
  std::getline(rows, row1);
  std::getline(rows, row2);
  EXPECT_EQ(row1, row2);
  std::vector<std::string> fields;
  std::istringstream cells(row1);
  for (std::string f; std::getline(cells, f, ',');) fields.push_back(f);
  ASSERT_EQ(fields.size(), 8u);
  EXPECT_NE(summary.find("\"iterations\": " + fields[4] + ","), std::string::npos);
  EXPECT_EQ(fields[6], "1");
  EXPECT_EQ(fields[7], "converged");

  RunConfig broken = base;
  broken.nx = 0;
  std::ostringstream csv2;
  run_sweep(broken, {{1.0, 1e-3, 1e-3, true}, {2.0, 1e-3, 1e-3, true}}, csv2, log);
  std::istringstream rows2(csv2.str());
  int failed = 0;
  for (std::string line; std::getline(rows2, line);) failed += line.find("failed") != std::string::npos;
  EXPECT_EQ(failed, 2);
  fs::remove_all(dir);
}

TEST(Run, ArtifactsAreDeterministic) {
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  RunConfig ca = small_sod(a), cb = small_sod(b);
  ca.vtk_every = cb.vtk_every = 5;
  std::ostringstream log;
  ASSERT_EQ(run_from_config(ca, log), kExitConverged);
  ASSERT_EQ(run_from_config(cb, log), kExitConverged);
  for (const char* f : {"convergence.csv", "solution.vtk", "solution_0005.vtk", "solution_0010.vtk", "reference.csv",
                        "summary.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_FALSE(fs::exists(a / "solution_0003.vtk"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, ExitCodes) {
  const fs::path dir = scratch_dir("codes");
  std::ostringstream log;
  RunConfig c = RunConfig::for_case("compression_corner");
  c.nx = c.ny = 8;
  c.max_iters = 2;
  c.output_dir = dir.string();
  EXPECT_EQ(run_from_config(c, log), kExitNotConverged);
  EXPECT_NE(slurp(dir / "summary.json").find("\"converged\": false"), std::string::npos);
  c.nx = 0;
  EXPECT_EQ(run_from_config(c, log), kExitError);
  fs::remove_all(dir);
}

TEST(Formats, VtkLayout) {
  const Mesh m = build_structured_quad(2, 1, {0.0, 2.0, 0.0, 1.0});
  const BlockVector U(m.num_nodes(), conserved_from_primitive({1.0, {1.0, 0.0}, 1.0 / kDefaultGamma}));
  std::ostringstream out;
  write_vtk(out, m, U, std::vector<double>(m.num_nodes(), 0.5));
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  for (const char* key : {"ASCII\n", "DATASET UNSTRUCTURED_GRID\n", "POINTS 6 double\n", "CELLS 2 10\n",
                          "CELL_TYPES 2\n9\n9\n", "POINT_DATA 6\n", "SCALARS density double 1\n",
                          "VECTORS velocity double\n", "SCALARS pressure double 1\n", "SCALARS mach double 1\n",
                          "SCALARS detector double 1\n"}) {
    EXPECT_NE(s.find(key), std::string::npos) << key;
  }
  // Mach one everywhere (u = 1, c = 1).
  const std::string mach = "SCALARS mach double 1\nLOOKUP_TABLE default\n";
  EXPECT_EQ(s.substr(s.find(mach) + mach.size(), 2), "1\n");
}

TEST(Formats, ConvergenceAndReferenceCsv) {
  IterationRecord r;
  r.step = 3;
  r.iter = 2;
  r.phase = Phase::kNewton;
  r.rel_residual = 0.5;
  r.rel_galerkin_residual = 0.25;
  r.rel_increment = 1e-3;
  r.lambda = 1.0;
  r.eps_k = 0.1;
  std::ostringstream c;
  write_convergence_csv(c, {r});
  EXPECT_EQ(c.str(),
            "step,iter,phase,rel_residual,rel_galerkin_residual,rel_increment,lambda,eps_k\n"
            "3,2,newton,0.5,0.25,0.001,1,0.10000000000000001\n");
  std::ostringstream ref;
  write_reference_csv(ref, {0.0, 1.0}, 0.2);
  EXPECT_EQ(ref.str(), "x,rho,u,p\n0,1,0,1\n1,0.125,0,0.10000000000000001\n");
}
