#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "eulerstab/io.hpp"

namespace eulerstab {

namespace pt = boost::property_tree;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig RunConfig::for_case(const std::string& name) {
  BenchmarkCase c;
  try {
    c = builtin_case(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  RunConfig r;
  r.case_name = c.name;
  r.nx = c.mesh.nx;
  r.ny = c.mesh.ny;
  r.target_h = c.mesh.target_h;
  r.q = c.stab.detector.q;
  r.eps = c.stab.detector.eps;
  r.sigma = c.stab.detector.sigma;
  r.zeta = c.stab.detector.zeta;
  r.differentiable = c.stab.detector.differentiable;
  r.tol1 = c.solver.tol1;
  r.tol2 = c.solver.tol2;
  r.tol_increment = c.solver.tol_increment;
  r.max_iters = c.solver.max_iters;
  r.continuation = c.solver.continuation;
  r.eps_tilde = c.solver.eps_tilde;
  r.transient = c.transient;
  r.dt = c.dt;
  r.dt_per_h = c.dt_per_h;
  r.steps = c.steps;
  r.t_end = c.t_end;
  return r;
}

BenchmarkCase RunConfig::to_case() const {
  BenchmarkCase c = builtin_case(case_name);
  c.mesh.nx = nx;
  c.mesh.ny = ny;
  c.mesh.target_h = target_h;
  c.stab.detector.q = q;
  c.stab.detector.eps = eps;
  c.stab.detector.sigma = sigma;
  c.stab.detector.zeta = zeta;
  c.stab.detector.differentiable = differentiable;
  c.solver.tol1 = tol1;
  c.solver.tol2 = tol2;
  c.solver.tol_increment = tol_increment;
  c.solver.max_iters = max_iters;
  c.solver.continuation = continuation;
  c.solver.eps_tilde = eps_tilde;
  c.transient = transient;
  c.dt = dt;
  c.dt_per_h = dt_per_h;
  c.steps = steps;
  c.t_end = t_end;
  return c;
}

namespace {

double to_double(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE) throw ConfigError("key '" + key + "': not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno == ERANGE || v < INT32_MIN || v > INT32_MAX) {
    throw ConfigError("key '" + key + "': not an integer: '" + s + "'");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("key '" + key + "': not a boolean: '" + s + "'");
}

using Setter = void (*)(RunConfig&, const std::string& key, const std::string& value);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mesh.nx", [](RunConfig& r, const std::string& k, const std::string& v) { r.nx = to_int(k, v); }},
      {"mesh.ny", [](RunConfig& r, const std::string& k, const std::string& v) { r.ny = to_int(k, v); }},
      {"mesh.target_h", [](RunConfig& r, const std::string& k, const std::string& v) { r.target_h = to_double(k, v); }},
      {"detector.q", [](RunConfig& r, const std::string& k, const std::string& v) { r.q = to_double(k, v); }},
      {"detector.eps", [](RunConfig& r, const std::string& k, const std::string& v) { r.eps = to_double(k, v); }},
      {"detector.sigma", [](RunConfig& r, const std::string& k, const std::string& v) { r.sigma = to_double(k, v); }},
      {"detector.zeta", [](RunConfig& r, const std::string& k, const std::string& v) { r.zeta = to_double(k, v); }},
      {"detector.differentiable",
       [](RunConfig& r, const std::string& k, const std::string& v) { r.differentiable = to_bool(k, v); }},
      {"solver.tol1", [](RunConfig& r, const std::string& k, const std::string& v) { r.tol1 = to_double(k, v); }},
      {"solver.tol2", [](RunConfig& r, const std::string& k, const std::string& v) { r.tol2 = to_double(k, v); }},
      {"solver.tol_increment",
       [](RunConfig& r, const std::string& k, const std::string& v) { r.tol_increment = to_double(k, v); }},
      {"solver.max_iters", [](RunConfig& r, const std::string& k, const std::string& v) { r.max_iters = to_int(k, v); }},
      {"solver.continuation",
       [](RunConfig& r, const std::string& k, const std::string& v) { r.continuation = to_bool(k, v); }},
      {"solver.eps_tilde", [](RunConfig& r, const std::string& k, const std::string& v) { r.eps_tilde = to_double(k, v); }},
      {"time.mode",
       [](RunConfig& r, const std::string& k, const std::string& v) {
         if (v == "steady") {
           r.transient = false;
         } else if (v == "transient") {
           r.transient = true;
         } else {
           throw ConfigError("key '" + k + "': expected 'steady' or 'transient', got '" + v + "'");
         }
       }},
      {"time.dt", [](RunConfig& r, const std::string& k, const std::string& v) { r.dt = to_double(k, v); }},
      {"time.dt_per_h", [](RunConfig& r, const std::string& k, const std::string& v) { r.dt_per_h = to_double(k, v); }},
      {"time.steps", [](RunConfig& r, const std::string& k, const std::string& v) { r.steps = to_int(k, v); }},
      {"time.t_end", [](RunConfig& r, const std::string& k, const std::string& v) { r.t_end = to_double(k, v); }},
      {"output.directory", [](RunConfig& r, const std::string&, const std::string& v) { r.output_dir = v; }},
      {"output.vtk", [](RunConfig& r, const std::string& k, const std::string& v) { r.write_vtk = to_bool(k, v); }},
      {"output.vtk_every", [](RunConfig& r, const std::string& k, const std::string& v) { r.vtk_every = to_int(k, v); }},
      {"output.convergence",
       [](RunConfig& r, const std::string& k, const std::string& v) { r.write_convergence = to_bool(k, v); }},
      {"output.summary", [](RunConfig& r, const std::string& k, const std::string& v) { r.write_summary = to_bool(k, v); }},
      {"output.reference",
       [](RunConfig& r, const std::string& k, const std::string& v) { r.write_reference = to_bool(k, v); }},
  };
  return table;
}

void validate(const RunConfig& r) {
  const auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(r.nx >= 1 && r.ny >= 1, "mesh.nx and mesh.ny must be positive");
  require(r.q > 0.0, "detector.q must be positive");
  require(r.eps >= 0.0 && r.sigma >= 0.0 && r.zeta >= 0.0, "detector regularization parameters must be non-negative");
  require(r.tol1 > 0.0 && r.tol2 > 0.0 && r.tol_increment >= 0.0, "solver tolerances must be positive");
  require(r.max_iters >= 1, "solver.max_iters must be positive");
  require(r.eps_tilde > 0.0, "solver.eps_tilde must be positive");
  require(r.vtk_every >= 0, "output.vtk_every must be non-negative");
  if (r.transient) {
    if (r.dt_per_h > 0.0) {
      require(r.steps >= 1, "time.steps must be positive when time.dt_per_h is set");
    } else {
      require(r.dt > 0.0 && r.t_end > 0.0, "transient runs need time.dt and time.t_end, or time.dt_per_h and time.steps");
    }
  }
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message(), static_cast<int>(e.line()));
  }

  std::string name;
  if (const auto c = tree.get_child_optional("case")) {
    for (const auto& [key, node] : *c) {
      if (key != "name") throw ConfigError("unknown key 'case." + key + "'");
      name = node.data();
    }
  }
  if (name.empty()) throw ConfigError("missing key 'case.name'");
  RunConfig r = RunConfig::for_case(name);

  static const std::set<std::string> sections = {"case", "mesh", "detector", "solver", "time", "output"};
  for (const auto& [section, node] : tree) {
    if (!sections.count(section)) {
      if (node.empty()) throw ConfigError("key '" + section + "' outside of a section");
      throw ConfigError("unknown section '[" + section + "]'");
    }
    if (section == "case") continue;
    for (const auto& [key, value] : node) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) throw ConfigError("unknown key '" + full + "'");
      it->second(r, full, value.data());
    }
  }
  validate(r);
  return r;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in);
}

void write_run_config(std::ostream& out, const RunConfig& r) {
  const auto b = [](bool v) { return v ? "true" : "false"; };
  out << "[case]\n"
      << "name = " << r.case_name << "\n\n"
      << "[mesh]\n"
      << "nx = " << r.nx << "\n"
      << "ny = " << r.ny << "\n"
      << "target_h = " << format_double(r.target_h) << "\n\n"
      << "[detector]\n"
      << "q = " << format_double(r.q) << "\n"
      << "eps = " << format_double(r.eps) << "\n"
      << "sigma = " << format_double(r.sigma) << "\n"
      << "zeta = " << format_double(r.zeta) << "\n"
      << "differentiable = " << b(r.differentiable) << "\n\n"
      << "[solver]\n"
      << "tol1 = " << format_double(r.tol1) << "\n"
      << "tol2 = " << format_double(r.tol2) << "\n"
      << "tol_increment = " << format_double(r.tol_increment) << "\n"
      << "max_iters = " << r.max_iters << "\n"
      << "continuation = " << b(r.continuation) << "\n"
      << "eps_tilde = " << format_double(r.eps_tilde) << "\n\n"
      << "[time]\n"
      << "mode = " << (r.transient ? "transient" : "steady") << "\n"
      << "dt = " << format_double(r.dt) << "\n"
      << "dt_per_h = " << format_double(r.dt_per_h) << "\n"
      << "steps = " << r.steps << "\n"
      << "t_end = " << format_double(r.t_end) << "\n\n"
      << "[output]\n"
      << "directory = " << r.output_dir << "\n"
      << "vtk = " << b(r.write_vtk) << "\n"
      << "vtk_every = " << r.vtk_every << "\n"
      << "convergence = " << b(r.write_convergence) << "\n"
      << "summary = " << b(r.write_summary) << "\n"
      << "reference = " << b(r.write_reference) << "\n";
}

}  // namespace eulerstab
