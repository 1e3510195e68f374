#include "fluxls/runner.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fluxls/number_format.hpp"
#include "fluxls/vtk.hpp"
#include "json.hpp"

namespace fluxls {

namespace {

using nlohmann::json;

template <typename T>
T field(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "problem") c.problem = field<std::string>(j, key);
    else if (key == "method") c.method = field<std::string>(j, key);
    else if (key == "k" || key == "order") {
      if (!value.is_number_integer()) throw ConfigError("config field '" + key + "' must be an integer");
      c.k = value.get<int>();
    } else if (key == "refinement") c.refinement = field<std::string>(j, key);
    else if (key == "theta") c.theta = field<double>(j, key);
    else if (key == "alpha_f") c.alpha_f = field<double>(j, key);
    else if (key == "node_budget") {
      if (!value.is_number_integer()) throw ConfigError("config field 'node_budget' must be an integer");
      c.node_budget = value.get<Index>();
    } else if (key == "levels") {
      if (!value.is_number_integer()) throw ConfigError("config field 'levels' must be an integer");
      c.levels = value.get<int>();
    } else if (key == "sweeps_per_level") {
      if (!value.is_number_integer()) throw ConfigError("config field 'sweeps_per_level' must be an integer");
      c.sweeps_per_level = value.get<int>();
    } else if (key == "solver_tol") c.solver_tol = field<double>(j, key);
    else if (key == "solver") c.solver = field<std::string>(j, key);
    else if (key == "output_dir") c.output_dir = field<std::string>(j, key);
    else if (key == "export_solutions") c.export_solutions = field<bool>(j, key);
    else if (key == "timing") c.timing = field<bool>(j, key);
    else throw ConfigError("unknown config field '" + key + "'");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  if (c.problem.empty()) throw ConfigError("config field 'problem' is required");
  const auto& names = catalog_names();
  if (std::find(names.begin(), names.end(), c.problem) == names.end()) {
    throw ConfigError("config field 'problem': unknown problem '" + c.problem + "'");
  }
  MethodKind m;
  try {
    m = parse_method(c.method);
  } catch (const std::invalid_argument&) {
    throw ConfigError("config field 'method': expected lsfem, lsfem-b1, lsfem-b2 or c-lsfem");
  }
  if (c.k != 0 && c.k != 1) throw ConfigError("config field 'k' must be 0 or 1");
  if (m == MethodKind::C_LSFEM && c.k != 1) throw ConfigError("config field 'k': c-lsfem uses continuous P1, k must be 1");
  if (c.refinement != "uniform" && c.refinement != "adaptive") {
    throw ConfigError("config field 'refinement' must be 'uniform' or 'adaptive'");
  }
  if (!(c.theta > 0.0 && c.theta <= 1.0)) throw ConfigError("config field 'theta' must lie in (0,1]");
  if (!(c.alpha_f > 0.0 && std::isfinite(c.alpha_f))) throw ConfigError("config field 'alpha_f' must be positive");
  if (c.node_budget < 3) throw ConfigError("config field 'node_budget' must be at least 3");
  if (c.levels < 1) throw ConfigError("config field 'levels' must be at least 1");
  if (c.sweeps_per_level < 1) throw ConfigError("config field 'sweeps_per_level' must be at least 1");
  if (c.solver != "cholesky" && c.solver != "cg") throw ConfigError("config field 'solver' must be 'cholesky' or 'cg'");
  if (!(c.solver_tol > 0.0 && c.solver_tol < 1.0)) throw ConfigError("config field 'solver_tol' must lie in (0,1)");
}

AmrConfig to_amr_config(const RunConfig& c) {
  AmrConfig a;
  a.method.kind = parse_method(c.method);
  a.method.alpha_F = c.alpha_f;
  a.k = c.k;
  a.theta = c.theta;
  a.node_budget = c.node_budget;
  a.sweeps_per_level = c.sweeps_per_level;
  a.solver.tol = c.solver_tol;
  a.solver.kind = c.solver == "cg" ? SolverKind::cg : SolverKind::cholesky;
  return a;
}

std::string csv_row(const AmrRecord& r, const AmrRecord* prev, bool adaptive) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double eoc_est = nan, eoc_l2 = nan;
  if (prev) {
    const double s0 = adaptive ? 1.0 / std::sqrt(static_cast<double>(prev->n_dofs)) : prev->h;
    const double s1 = adaptive ? 1.0 / std::sqrt(static_cast<double>(r.n_dofs)) : r.h;
    eoc_est = pair_rate(s0, s1, prev->estimator, r.estimator);
    eoc_l2 = pair_rate(s0, s1, prev->l2_u_error, r.l2_u_error);
  }
  std::ostringstream out;
  out << r.iter << ',' << r.n_vertices << ',' << r.n_triangles << ',' << r.n_dofs << ',' << format_double(r.estimator)
      << ',' << format_double(r.ls_error) << ',' << format_double(r.l2_u_error) << ',' << format_double(r.overshoot)
      << ',' << r.cg_iters << ',' << format_double(r.wall_ms) << ',' << format_double(eoc_est) << ','
      << format_double(eoc_l2);
  return out.str();
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    validate(config);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const ProblemSpec problem = make_problem(config.problem);
  AmrConfig amr = to_amr_config(config);

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  const std::filesystem::path dir(config.output_dir);
  std::ofstream csv(dir / "convergence.csv");
  if (!csv) {
    log << "config error: cannot write to output_dir '" << config.output_dir << "'\n";
    return kExitConfigError;
  }
  csv << kCsvHeader << '\n' << std::flush;

  const bool adaptive = config.refinement == "adaptive";
  std::optional<AmrRecord> previous;
  const IterationHook hook = [&](const AmrRecord& rec, const Mesh& mesh, const DiscreteSolution& sol) {
    AmrRecord row = rec;
    if (!config.timing) row.wall_ms = 0.0;
    csv << csv_row(row, previous ? &*previous : nullptr, adaptive) << '\n' << std::flush;
    previous = row;
    log << "iter " << rec.iter << ": nodes " << rec.n_vertices << ", estimator " << format_double(rec.estimator)
        << '\n';
    if (config.export_solutions) {
      const auto path = dir / ("solution_" + std::to_string(rec.iter) + ".vtk");
      write_vtk(path.string(), mesh, cell_average_u(mesh, sol), cell_average_flux(mesh, sol, problem));
    }
  };

  AmrResult result;
  try {
    result = adaptive ? amr_loop(problem, amr, hook) : uniform_run(problem, amr, config.levels, hook);
  } catch (const AssemblyError& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const MeshError& e) {
    log << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  if (result.solver_failed) {
    log << "solver failure: " << result.message << '\n';
    return kExitSolverFailure;
  }
  return kExitOk;
}

}  // namespace fluxls
