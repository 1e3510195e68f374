// Command-line experiment runner: reads a JSON config, applies flag
// overrides, and writes convergence.csv into the output directory.

#include <iostream>

#include "CLI11.hpp"
#include "fluxls/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Least-squares finite element solver for linear transport"};
  std::string config_path;
  fluxls::RunConfig flags;
  app.add_option("-c,--config", config_path, "JSON config file");
  auto* problem = app.add_option("--problem", flags.problem, "catalog problem name");
  auto* method = app.add_option("--method", flags.method, "lsfem, lsfem-b1, lsfem-b2 or c-lsfem");
  auto* k = app.add_option("-k,--order", flags.k, "polynomial order (0 or 1)");
  auto* refinement = app.add_option("--refinement", flags.refinement, "uniform or adaptive");
  auto* theta = app.add_option("--theta", flags.theta, "Doerfler parameter");
  auto* alpha = app.add_option("--alpha-f", flags.alpha_f, "LSFEM-B2 weight factor");
  auto* budget = app.add_option("--node-budget", flags.node_budget, "stop after this many vertices");
  auto* levels = app.add_option("--levels", flags.levels, "number of uniform levels");
  auto* sweeps = app.add_option("--sweeps-per-level", flags.sweeps_per_level, "bisection sweeps per uniform level");
  auto* tol = app.add_option("--solver-tol", flags.solver_tol, "relative residual tolerance");
  auto* solver = app.add_option("--solver", flags.solver, "cholesky or cg");
  auto* out = app.add_option("-o,--output-dir", flags.output_dir, "output directory");
  auto* vtk = app.add_flag("--export-solutions", flags.export_solutions, "write VTK files per iteration");
  bool no_timing = false;
  app.add_flag("--no-timing", no_timing, "write 0 in the wall_ms column");

  bool list = false;
  app.add_flag("--list", list, "print the problem catalog and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fluxls::kExitConfigError;
  }
  if (list) {
    for (const auto& name : fluxls::catalog_names()) std::cout << name << '\n';
    return 0;
  }

  fluxls::RunConfig config;
  if (!config_path.empty()) {
    try {
      config = fluxls::load_config(config_path);
    } catch (const fluxls::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return fluxls::kExitConfigError;
    }
  }
  if (*problem) config.problem = flags.problem;
  if (*method) config.method = flags.method;
  if (*k) config.k = flags.k;
  if (*refinement) config.refinement = flags.refinement;
  if (*theta) config.theta = flags.theta;
  if (*alpha) config.alpha_f = flags.alpha_f;
  if (*budget) config.node_budget = flags.node_budget;
  if (*levels) config.levels = flags.levels;
  if (*sweeps) config.sweeps_per_level = flags.sweeps_per_level;
  if (*tol) config.solver_tol = flags.solver_tol;
  if (*solver) config.solver = flags.solver;
  if (*out) config.output_dir = flags.output_dir;
  if (*vtk) config.export_solutions = true;
  if (no_timing) config.timing = false;
  return fluxls::run(config, std::cerr);
}
