#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fluxls/adaptivity.hpp"

namespace fluxls {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string problem;
  std::string method = "lsfem";
  int k = 0;
  std::string refinement = "adaptive";
  double theta = 0.5;
  double alpha_f = 10.0;
  Index node_budget = 20000;
  int levels = 6;
  int sweeps_per_level = 2;
  double solver_tol = 1e-10;
  std::string solver = "cholesky";  ///< cholesky or cg (Jacobi-preconditioned)
  std::string output_dir = ".";
  bool export_solutions = false;
  /// When false the wall_ms column is written as 0 so that repeated runs
  /// produce identical files.
  bool timing = true;
};

enum ExitCode : int { kExitOk = 0, kExitSolverFailure = 2, kExitConfigError = 3 };

/// Parse a JSON object; unknown keys and wrongly typed values raise
/// ConfigError naming the field.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& config);

AmrConfig to_amr_config(const RunConfig& config);

inline constexpr std::string_view kCsvHeader =
    "iter,n_nodes,n_elems,n_dofs,estimator,ls_error,l2_u_error,overshoot,cg_iters,wall_ms,eoc_estimator,eoc_l2";

/// One CSV row; `previous` supplies the EOC columns (empty for the first row).
/// Adaptive runs measure size by n_dofs^{-1/2}, uniform runs by h.
std::string csv_row(const AmrRecord& rec, const AmrRecord* previous, bool adaptive);

/// Runs the experiment, writing convergence.csv (and VTK files on request)
/// into output_dir. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& log);

}  // namespace fluxls
