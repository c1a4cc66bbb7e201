#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "eulerstab/io.hpp"

using namespace eulerstab;

int main(int argc, char** argv) {
  CLI::App app{"Implicit stabilized finite element solver for the 2D Euler equations"};
  app.require_subcommand(1);

  std::string cfg_path;
  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("config", cfg_path, "INI configuration file")->required();

  std::string sweep_path, grid, out_path;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid and write one CSV row per point");
  sweep->add_option("config", sweep_path, "Base INI configuration file")->required();
  sweep->add_option("--grid", grid, "e.g. \"q=1,2,4;eps=1e-2,1e-3;sigma=1e-1;differentiable=0,1\"");
  sweep->add_option("-o,--output", out_path, "CSV file (default: standard output)");

  auto* verify = app.add_subcommand("verify", "Run oracle self-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitConverged : kExitError;
  }

  try {
    if (run->parsed()) return run_from_config(load_run_config(cfg_path), std::cerr);
    if (sweep->parsed()) {
      const RunConfig base = load_run_config(sweep_path);
      const std::vector<SweepPoint> points = parse_sweep_grid(grid, base);
      if (out_path.empty()) {
        run_sweep(base, points, std::cout, std::cerr);
      } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        run_sweep(base, points, out, std::cerr);
      }
      return kExitConverged;
    }
    if (verify->parsed()) return run_verify(std::cout) ? kExitConverged : kExitError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
