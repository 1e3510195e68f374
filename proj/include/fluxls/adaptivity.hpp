#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fluxls/assembly.hpp"
#include "fluxls/errors.hpp"
#include "fluxls/mesh.hpp"
#include "fluxls/problem.hpp"

namespace fluxls {

/// Per-element indicator values (eta_K, xi_K or zeta_K depending on method).
struct Indicators {
  std::vector<double> local;

  double global() const;
};

Indicators compute_indicators(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem,
                              int degree = 0);

/// Doerfler marking on squared indicator values: the shortest prefix of the
/// descending order (ties by ascending id) carrying theta of the total mass.
std::vector<Index> dorfler_mark_squared(std::span<const double> squared, double theta);
std::vector<Index> dorfler_mark(const Indicators& ind, double theta);

/// max(max(v) - hi, lo - min(v), 0) over coefficient values. P0 and
/// barycentric P1 coefficients are element values and vertex values.
double overshoot(std::span<const double> values, const std::array<double, 2>& bounds);

struct AmrConfig {
  Method method;
  int k = 0;
  double theta = 0.5;
  Index node_budget = 20000;
  SolverOptions solver;
  /// Stop when the global estimator falls below this value.
  double estimator_tol = 1e-10;
  int max_iterations = 1000;
  /// Bisection sweeps per uniform level; two sweeps halve h.
  int sweeps_per_level = 2;
  bool keep_meshes = false;
};

struct AmrRecord {
  int iter = 0;
  Index n_vertices = 0;
  Index n_triangles = 0;
  Index n_dofs = 0;
  double estimator = 0.0;
  double ls_error = std::numeric_limits<double>::quiet_NaN();
  double l2_u_error = std::numeric_limits<double>::quiet_NaN();
  double overshoot = std::numeric_limits<double>::quiet_NaN();
  int cg_iters = 0;
  double wall_ms = 0.0;
  /// Size parameter for uniform runs, sqrt(|domain| / n_triangles).
  double h = 0.0;
};

struct AmrResult {
  std::vector<AmrRecord> records;
  /// Triangles marked after each recorded iteration (empty for the last).
  std::vector<std::vector<Index>> marked;
  /// Mesh of every iteration when requested.
  std::vector<Mesh> meshes;
  Mesh final_mesh;
  DiscreteSolution final_solution;
  bool solver_failed = false;
  std::string message;
};

using IterationHook = std::function<void(const AmrRecord&, const Mesh&, const DiscreteSolution&)>;

/// solve -> estimate -> record -> mark -> refine until the node budget is
/// reached or the estimator vanishes.
AmrResult amr_loop(const ProblemSpec& problem, const AmrConfig& config, const IterationHook& hook = {});

/// Solves on `levels` meshes: the problem's mesh family when it has one,
/// otherwise successive uniform refinements of the initial mesh.
AmrResult uniform_run(const ProblemSpec& problem, const AmrConfig& config, int levels,
                      const IterationHook& hook = {});

/// Least-squares slope of log(error) against log(size) over the last `count`
/// entries; NaN if fewer than two usable points.
double fitted_rate(std::span<const double> size, std::span<const double> error, std::size_t count);

/// Rate of consecutive records: log(e0/e1) / log(s0/s1).
double pair_rate(double size0, double size1, double error0, double error1);

}  // namespace fluxls
