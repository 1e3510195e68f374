#include "fluxls/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace fluxls {

double Indicators::global() const {
  double s = 0.0;
  for (double v : local) s += v * v;
  return std::sqrt(s);
}

Indicators compute_indicators(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem, int degree) {
  Indicators ind;
  for (const auto& t : element_residuals(mesh, sol, problem, degree)) ind.local.push_back(std::sqrt(t.total()));
  return ind;
}

std::vector<Index> dorfler_mark_squared(std::span<const double> squared, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0,1]");
  std::vector<Index> order(squared.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return squared[static_cast<std::size_t>(a)] > squared[static_cast<std::size_t>(b)];
  });
  double total = 0.0;
  for (double v : squared) total += v;
  std::vector<Index> marked;
  if (!(total > 0.0)) return marked;
  const double target = theta * total;
  double acc = 0.0;
  for (Index id : order) {
    const double v = squared[static_cast<std::size_t>(id)];
    if (acc >= target || v <= 0.0) break;
    marked.push_back(id);
    acc += v;
  }
  return marked;
}

std::vector<Index> dorfler_mark(const Indicators& ind, double theta) {
  std::vector<double> sq(ind.local.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = ind.local[i] * ind.local[i];
  return dorfler_mark_squared(sq, theta);
}

double overshoot(std::span<const double> values, const std::array<double, 2>& bounds) {
  double worst = 0.0;
  for (double v : values) worst = std::max({worst, v - bounds[1], bounds[0] - v});
  return worst;
}

double pair_rate(double size0, double size1, double error0, double error1) {
  if (!(size0 > 0.0 && size1 > 0.0 && error0 > 0.0 && error1 > 0.0) || size0 == size1) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::log(error0 / error1) / std::log(size0 / size1);
}

double fitted_rate(std::span<const double> size, std::span<const double> error, std::size_t count) {
  const std::size_t n = std::min(size.size(), error.size());
  const std::size_t first = n > count ? n - count : 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = first; i < n; ++i) {
    if (!(size[i] > 0.0 && error[i] > 0.0)) continue;
    const double x = std::log(size[i]), y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double det = m * sxx - sx * sx;
  if (m < 2 || !(std::abs(det) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / det;
}

namespace {

AmrRecord evaluate(int iter, const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem,
                   const Indicators& ind) {
  AmrRecord r;
  r.iter = iter;
  r.n_vertices = mesh.n_vertices();
  r.n_triangles = mesh.n_triangles();
  r.n_dofs = static_cast<Index>(sol.sigma.size() + sol.u.size());
  r.estimator = ind.global();
  r.cg_iters = sol.report.iterations;
  r.h = std::sqrt(mesh.total_area() / mesh.n_triangles());
  if (problem.has_exact()) {
    const auto err = exact_errors(mesh, sol, problem);
    r.ls_error = err.ls_norm;
    r.l2_u_error = err.l2_u;
  }
  if (problem.exact_u_bounds) r.overshoot = overshoot(sol.u, *problem.exact_u_bounds);
  return r;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

AmrResult amr_loop(const ProblemSpec& problem, const AmrConfig& config, const IterationHook& hook) {
  if (!(config.theta > 0.0 && config.theta <= 1.0)) throw std::invalid_argument("theta must lie in (0,1]");
  AmrResult result;
  Mesh mesh = problem.initial_mesh;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const auto start = Clock::now();
    DiscreteSolution sol = solve(mesh, config.method, config.k, problem, config.solver);
    if (!sol.report.converged) {
      result.solver_failed = true;
      result.message = "solver did not converge at iteration " + std::to_string(iter) + " (relative residual " +
                       std::to_string(sol.report.relative_residual) + ")";
      break;
    }
    const Indicators ind = compute_indicators(mesh, sol, problem);
    const double solve_ms = elapsed_ms(start);
    AmrRecord rec = evaluate(iter, mesh, sol, problem, ind);
    rec.wall_ms = solve_ms;
    result.records.push_back(rec);
    if (config.keep_meshes) result.meshes.push_back(mesh);
    if (hook) hook(rec, mesh, sol);

    const bool done = rec.estimator <= config.estimator_tol || mesh.n_vertices() >= config.node_budget;
    std::vector<Index> marked = done ? std::vector<Index>{} : dorfler_mark(ind, config.theta);
    result.final_mesh = mesh;
    result.final_solution = std::move(sol);
    result.marked.push_back(marked);
    if (marked.empty()) break;
    mesh = refine(mesh, marked);
  }
  return result;
}

AmrResult uniform_run(const ProblemSpec& problem, const AmrConfig& config, int levels, const IterationHook& hook) {
  AmrResult result;
  Mesh mesh = problem.mesh_family ? problem.mesh_family(0) : problem.initial_mesh;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) {
      if (problem.mesh_family) {
        mesh = problem.mesh_family(level);
      } else {
        for (int s = 0; s < config.sweeps_per_level; ++s) mesh = uniform_refine(mesh);
      }
    }
    const auto start = Clock::now();
    DiscreteSolution sol = solve(mesh, config.method, config.k, problem, config.solver);
    if (!sol.report.converged) {
      result.solver_failed = true;
      result.message = "solver did not converge at level " + std::to_string(level) + " (relative residual " +
                       std::to_string(sol.report.relative_residual) + ")";
      break;
    }
    const Indicators ind = compute_indicators(mesh, sol, problem);
    const double solve_ms = elapsed_ms(start);
    AmrRecord rec = evaluate(level, mesh, sol, problem, ind);
    rec.wall_ms = solve_ms;
    result.records.push_back(rec);
    if (config.keep_meshes) result.meshes.push_back(mesh);
    if (hook) hook(rec, mesh, sol);
    result.marked.emplace_back();
    result.final_mesh = mesh;
    result.final_solution = std::move(sol);
  }
  return result;
}

}  // namespace fluxls
