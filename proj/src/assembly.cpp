#include "fluxls/assembly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fluxls/errors.hpp"
#include "fluxls/quadrature.hpp"

namespace fluxls {

namespace {

constexpr double kDegenerateBetaN = 1e-12;

Vec2 to_reference(const ElementGeometry& geo, const Vec2& x) {
  const Vec2 d = x - geo.corners[0];
  const double a = geo.jacobian[0], b = geo.jacobian[1], c = geo.jacobian[2], e = geo.jacobian[3];
  return {(e * d.x - b * d.y) / geo.det, (-c * d.x + a * d.y) / geo.det};
}

void require_classified(const Mesh& mesh) {
  if (!mesh.classified()) throw AssemblyError("mesh boundary is not classified");
}

using LocalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

// Physical quadrature points of one element with mapped basis values: the
// standard rule, or the split rule on elements cut by the discontinuity.
struct ElementPoints {
  std::vector<Vec2> x;
  std::vector<double> w;
  std::vector<BasisEval> basis;

  std::size_t size() const { return w.size(); }
};

class ElementRules {
 public:
  ElementRules(int degree, std::vector<SpaceKind> spaces, const std::optional<Discontinuity>& disc)
      : degree_(degree), rule_(quadrature(QuadDomain::triangle, degree)), spaces_(std::move(spaces)), disc_(disc) {
    for (SpaceKind s : spaces_) cached_.push_back(reference_basis(s, rule_.points));
  }

  ElementPoints at(const Mesh& mesh, Index t) const {
    const auto geo = ElementGeometry::of(mesh, t);
    ElementPoints out;
    if (disc_ && is_cut(mesh.corners(t), *disc_)) {
      const auto pts = element_quadrature(mesh, t, degree_, disc_);
      std::vector<Vec2> refs;
      for (const auto& p : pts) {
        refs.push_back(p.ref);
        out.x.push_back(p.x);
        out.w.push_back(p.weight);
      }
      for (SpaceKind s : spaces_) out.basis.push_back(piola_map(geo, reference_basis(s, refs)));
      return out;
    }
    for (std::size_t q = 0; q < rule_.size(); ++q) {
      out.x.push_back(geo.map(rule_.points[q]));
      out.w.push_back(rule_.weights[q] * geo.det);
    }
    for (const auto& ref : cached_) out.basis.push_back(piola_map(geo, ref));
    return out;
  }

 private:
  int degree_;
  const QuadratureRule& rule_;
  std::vector<SpaceKind> spaces_;
  std::vector<BasisEval> cached_;
  std::optional<Discontinuity> disc_;
};

// Scatter a local block whose upper triangle is filled; the lower triangle is
// mirrored so that the global matrix is exactly symmetric.
void scatter(const LocalMatrix& m, std::span<const Index> ids, std::vector<Triplet>& out) {
  const auto n = static_cast<Eigen::Index>(ids.size());
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double v = a <= b ? m(a, b) : m(b, a);
      out.push_back({ids[static_cast<std::size_t>(a)], ids[static_cast<std::size_t>(b)], v});
    }
  }
}

void assemble_flux_method(const Mesh& mesh, const ProblemSpec& problem, LinearSystem& sys,
                          std::vector<Triplet>& trip) {
  const int k = sys.k;
  const ElementRules rules(triangle_degree(k), {sys.flux.space, sys.scalar.space}, problem.discontinuity);
  const std::size_t nf = static_cast<std::size_t>(local_dimension(sys.flux.space));
  const std::size_t ns = static_cast<std::size_t>(local_dimension(sys.scalar.space));
  const std::size_t n = nf + ns;
  const Index offset = sys.flux.n_global;

  std::vector<Vec2> r1(n);
  std::vector<double> r2(n);
  std::vector<Index> ids(n);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const ElementPoints pts = rules.at(mesh, t);
    const BasisEval& flux = pts.basis[0];
    const BasisEval& scalar = pts.basis[1];
    LocalMatrix m = LocalMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const Vec2 x = pts.x[q];
      const double w = pts.w[q];
      const Vec2 beta = problem.beta(x);
      const double gamma = problem.gamma(x);
      const double f = problem.f(x);
      for (std::size_t a = 0; a < nf; ++a) {
        r1[a] = flux.vector(q, a);
        r2[a] = flux.divergence(q, a);
      }
      for (std::size_t a = 0; a < ns; ++a) {
        const double v = scalar.scalar(q, a);
        r1[nf + a] = -v * beta;
        r2[nf + a] = gamma * v;
      }
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
          m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += w * (dot(r1[a], r1[b]) + r2[a] * r2[b]);
        }
        sys.load[static_cast<std::size_t>(a < nf ? sys.flux.dofs(t)[a] : offset + sys.scalar.dofs(t)[a - nf])] +=
            w * f * r2[a];
      }
      sys.constant += w * f * f;
    }
    for (std::size_t a = 0; a < nf; ++a) ids[a] = sys.flux.dofs(t)[a];
    for (std::size_t a = 0; a < ns; ++a) ids[nf + a] = offset + sys.scalar.dofs(t)[a];
    scatter(m, ids, trip);
  }
}

void assemble_weak_inflow(const Mesh& mesh, const ProblemSpec& problem, LinearSystem& sys,
                          std::vector<Triplet>& trip) {
  const auto& rule = quadrature(QuadDomain::segment, edge_degree(sys.k));
  const std::size_t nf = static_cast<std::size_t>(local_dimension(sys.flux.space));
  std::vector<double> tn(nf);
  for (Index e = 0; e < mesh.n_edges(); ++e) {
    const auto& edge = mesh.edge(e);
    if (edge.boundary_class != BoundaryClass::inflow) continue;
    const Index t = edge.triangles[0];
    const auto geo = ElementGeometry::of(mesh, t);
    const Vec2 lo = mesh.vertex(edge.vertices[0]);
    const Vec2 hi = mesh.vertex(edge.vertices[1]);
    LocalMatrix m = LocalMatrix::Zero(static_cast<Eigen::Index>(nf), static_cast<Eigen::Index>(nf));
    const auto ids = sys.flux.dofs(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = lo + rule.points[q].x * (hi - lo);
      const double w = rule.weights[q] * edge.length;
      const Vec2 ref_pt = to_reference(geo, x);
      const BasisEval basis = piola_map(geo, reference_basis(sys.flux.space, std::span<const Vec2>(&ref_pt, 1)));
      const double beta_n = dot(problem.beta(x), edge.normal);
      const double weight = inflow_weight(sys.method, edge.length, beta_n);
      const double datum = beta_n * problem.g(x);
      for (std::size_t a = 0; a < nf; ++a) tn[a] = dot(basis.vector(0, a), edge.normal);
      for (std::size_t a = 0; a < nf; ++a) {
        for (std::size_t b = a; b < nf; ++b) m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += w * weight * tn[a] * tn[b];
        sys.load[static_cast<std::size_t>(ids[a])] += w * weight * datum * tn[a];
      }
      sys.constant += w * weight * datum * datum;
    }
    scatter(m, ids, trip);
  }
}

void assemble_clsfem(const Mesh& mesh, const ProblemSpec& problem, LinearSystem& sys, std::vector<Triplet>& trip) {
  const ElementRules rules(triangle_degree(1), {SpaceKind::P1c}, problem.discontinuity);
  std::array<double, 3> r{};
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const ElementPoints pts = rules.at(mesh, t);
    const BasisEval& basis = pts.basis[0];
    const double h = mesh.triangle(t).diameter;
    LocalMatrix m = LocalMatrix::Zero(3, 3);
    const auto ids = sys.scalar.dofs(t);
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const Vec2 x = pts.x[q];
      const double w = pts.w[q];
      const Vec2 beta = problem.beta(x);
      const double mu = reaction_mu(problem, x, h);
      const double f = problem.f(x);
      for (std::size_t a = 0; a < 3; ++a) r[a] = dot(beta, basis.gradient(q, a)) + mu * basis.scalar(q, a);
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a; b < 3; ++b) m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += w * r[a] * r[b];
        sys.load[static_cast<std::size_t>(ids[a])] += w * f * r[a];
      }
      sys.constant += w * f * f;
    }
    scatter(m, ids, trip);
  }
}

bool on_segment_interior(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len = norm(d);
  const double tol = 1e-12 * std::max(1.0, len);
  if (std::abs(cross(d, p - a)) / len > tol) return false;
  const double s = dot(p - a, d) / (len * len);
  return s * len > tol && (1.0 - s) * len > tol;
}

}  // namespace

std::string to_string(MethodKind m) {
  switch (m) {
    case MethodKind::LSFEM: return "lsfem";
    case MethodKind::LSFEM_B1: return "lsfem-b1";
    case MethodKind::LSFEM_B2: return "lsfem-b2";
    case MethodKind::C_LSFEM: return "c-lsfem";
  }
  return "unknown";
}

MethodKind parse_method(std::string_view name) {
  if (name == "lsfem") return MethodKind::LSFEM;
  if (name == "lsfem-b1") return MethodKind::LSFEM_B1;
  if (name == "lsfem-b2") return MethodKind::LSFEM_B2;
  if (name == "c-lsfem") return MethodKind::C_LSFEM;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

double reaction_mu(const ProblemSpec& problem, const Vec2& x, double h) {
  const double gamma = problem.gamma(x);
  if (problem.div_beta) return gamma + problem.div_beta(x);
  const double d = 1e-6 * h;
  const double dbx = problem.beta(x + Vec2{d, 0.0}).x - problem.beta(x - Vec2{d, 0.0}).x;
  const double dby = problem.beta(x + Vec2{0.0, d}).y - problem.beta(x - Vec2{0.0, d}).y;
  return gamma + (dbx + dby) / (2.0 * d);
}

double inflow_weight(const Method& method, double h_F, double beta_n) {
  if (!(std::abs(beta_n) >= kDegenerateBetaN)) {
    throw AssemblyError("inflow edge with |beta.n| below threshold; weak inflow methods need |beta.n| >= c > 0 on the inflow boundary");
  }
  const double omega = method.kind == MethodKind::LSFEM_B2 ? method.alpha_F * h_F : 1.0;
  return omega / std::abs(beta_n);
}

LinearSystem assemble(const Mesh& mesh, const Method& method, int k, const ProblemSpec& problem) {
  require_classified(mesh);
  if (k != 0 && k != 1) throw AssemblyError("order k must be 0 or 1");
  if (method.kind == MethodKind::LSFEM_B2 && !(method.alpha_F > 0.0 && std::isfinite(method.alpha_F))) {
    throw AssemblyError("alpha_F must be finite and positive");
  }
  LinearSystem sys;
  sys.method = method;
  sys.k = k;
  std::vector<Triplet> trip;
  if (method.uses_flux()) {
    sys.flux = make_dofmap(mesh, flux_space(k));
    sys.scalar = make_dofmap(mesh, scalar_space(k));
    sys.load.assign(static_cast<std::size_t>(sys.size()), 0.0);
    assemble_flux_method(mesh, problem, sys, trip);
    if (method.weak_inflow()) assemble_weak_inflow(mesh, problem, sys, trip);
  } else {
    sys.scalar = make_dofmap(mesh, SpaceKind::P1c);
    sys.load.assign(static_cast<std::size_t>(sys.size()), 0.0);
    assemble_clsfem(mesh, problem, sys, trip);
  }
  sys.matrix = SparseSym::from_triplets(sys.size(), std::move(trip));
  return sys;
}

BoundaryData project_inflow_g(const Mesh& mesh, const ProblemSpec& problem, int k) {
  require_classified(mesh);
  BoundaryData bc;
  const int per_edge = k == 0 ? 1 : 2;
  for (Index e = 0; e < mesh.n_edges(); ++e) {
    const auto& edge = mesh.edge(e);
    if (edge.boundary_class != BoundaryClass::inflow) continue;
    const Vec2 a = mesh.vertex(edge.vertices[0]);
    const Vec2 b = mesh.vertex(edge.vertices[1]);
    for (const auto& z : problem.g_jump_points) {
      if (on_segment_interior(z, a, b)) {
        throw AssemblyError("inflow datum jumps inside inflow edge " + std::to_string(e) +
                            "; jump points must be mesh vertices");
      }
    }
    const Vec2 n = edge.normal;
    const auto m = edge_moments(mesh, e, [&](const Vec2& x) { return dot(problem.beta(x), n) * problem.g(x); }, k);
    for (int j = 0; j < per_edge; ++j) {
      bc.dofs.push_back(per_edge * e + j);
      bc.values.push_back(m[static_cast<std::size_t>(j)]);
    }
  }
  return bc;
}

BoundaryData assemble_clsfem_bc(const Mesh& mesh, const ProblemSpec& problem) {
  require_classified(mesh);
  std::vector<char> inflow(static_cast<std::size_t>(mesh.n_vertices()), 0);
  std::vector<std::vector<Index>> boundary_nbrs(static_cast<std::size_t>(mesh.n_vertices()));
  for (const auto& edge : mesh.edges()) {
    if (!edge.on_boundary()) continue;
    const Index a = edge.vertices[0], b = edge.vertices[1];
    boundary_nbrs[static_cast<std::size_t>(a)].push_back(b);
    boundary_nbrs[static_cast<std::size_t>(b)].push_back(a);
    if (edge.boundary_class == BoundaryClass::inflow) {
      inflow[static_cast<std::size_t>(a)] = 1;
      inflow[static_cast<std::size_t>(b)] = 1;
    }
  }
  BoundaryData bc;
  for (Index v = 0; v < mesh.n_vertices(); ++v) {
    if (!inflow[static_cast<std::size_t>(v)]) continue;
    const Vec2 z = mesh.vertex(v);
    const bool jump = std::any_of(problem.g_jump_points.begin(), problem.g_jump_points.end(),
                                  [&](const Vec2& p) { return distance(p, z) <= 1e-12 * std::max(1.0, norm(z)); });
    double value = 0.0;
    if (jump && !boundary_nbrs[static_cast<std::size_t>(v)].empty()) {
      // One-sided limits along the two boundary edges meeting at z.
      for (Index w : boundary_nbrs[static_cast<std::size_t>(v)]) value += problem.g(z + 1e-8 * (mesh.vertex(w) - z));
      value /= static_cast<double>(boundary_nbrs[static_cast<std::size_t>(v)].size());
    } else {
      value = problem.g(z);
    }
    bc.dofs.push_back(v);
    bc.values.push_back(value);
  }
  return bc;
}

std::vector<double> ReducedSystem::expand(std::span<const double> reduced) const {
  std::vector<double> x = lifting;
  for (std::size_t i = 0; i < free_dofs.size(); ++i) x[static_cast<std::size_t>(free_dofs[i])] = reduced[i];
  return x;
}

ReducedSystem apply_strong_bc(const SparseSym& a, std::span<const double> b, const BoundaryData& bc) {
  const auto n = static_cast<std::size_t>(a.n());
  ReducedSystem out;
  out.lifting.assign(n, 0.0);
  std::vector<char> fixed(n, 0);
  for (std::size_t i = 0; i < bc.dofs.size(); ++i) {
    const auto d = static_cast<std::size_t>(bc.dofs[i]);
    fixed[d] = 1;
    out.lifting[d] = bc.values[i];
  }
  std::vector<Index> new_id(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed[i]) continue;
    new_id[i] = static_cast<Index>(out.free_dofs.size());
    out.free_dofs.push_back(static_cast<Index>(i));
  }
  const auto ax = a.multiply(out.lifting);
  std::vector<Triplet> trip;
  trip.reserve(a.nnz());
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed[i]) continue;
    out.load.push_back(b[i] - ax[i]);
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const auto j = static_cast<std::size_t>(a.col_idx()[static_cast<std::size_t>(p)]);
      if (fixed[j]) continue;
      trip.push_back({new_id[i], new_id[j], a.values()[static_cast<std::size_t>(p)]});
    }
  }
  out.matrix = SparseSym::from_triplets(static_cast<int>(out.free_dofs.size()), std::move(trip));
  return out;
}

std::vector<double> DiscreteSolution::stacked() const {
  std::vector<double> x = sigma;
  x.insert(x.end(), u.begin(), u.end());
  return x;
}

DiscreteSolution make_solution(const LinearSystem& sys, std::span<const double> x) {
  DiscreteSolution s;
  s.method = sys.method;
  s.k = sys.k;
  s.flux = sys.flux;
  s.scalar = sys.scalar;
  const auto nf = static_cast<std::size_t>(sys.n_flux());
  s.sigma.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nf));
  s.u.assign(x.begin() + static_cast<std::ptrdiff_t>(nf), x.end());
  return s;
}

DiscreteSolution solve(const Mesh& mesh, const Method& method, int k, const ProblemSpec& problem,
                       const SolverOptions& options) {
  const LinearSystem sys = assemble(mesh, method, k, problem);
  BoundaryData bc;
  if (method.kind == MethodKind::LSFEM) bc = project_inflow_g(mesh, problem, k);
  if (method.kind == MethodKind::C_LSFEM) bc = assemble_clsfem_bc(mesh, problem);
  const ReducedSystem red = apply_strong_bc(sys.matrix, sys.load, bc);

  // Solve in the unit-diagonal basis: flux and scalar diagonals scale like
  // 1/|K| and |K|, so unscaled residuals bottom out at rounding level on
  // graded meshes. The tolerance applies to the scaled system.
  std::vector<double> s = red.matrix.diagonal();
  for (double& v : s) v = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
  const SparseSym a = red.matrix.scaled(s);
  std::vector<double> rhs(red.load.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = s[i] * red.load[i];

  SolveReport report;
  std::vector<double> y;
  if (options.kind == SolverKind::dense) {
    y = dense_solve(a, rhs);
    report.converged = true;
  } else {
    auto res = options.kind == SolverKind::cg ? cg_solve(a, rhs, options.tol, options.maxit, options.precond)
                                              : cholesky_solve(a, rhs, options.tol);
    y = std::move(res.x);
    report = res.report;
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= s[i];
  DiscreteSolution sol = make_solution(sys, red.expand(y));
  sol.report = report;
  return sol;
}

std::vector<ElementTerms> element_residuals(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem,
                                            int degree) {
  if (degree <= 0) degree = triangle_degree(sol.k);
  std::vector<ElementTerms> out(static_cast<std::size_t>(mesh.n_triangles()));

  if (!sol.method.uses_flux()) {
    const ElementRules rules(degree, {SpaceKind::P1c}, problem.discontinuity);
    for (Index t = 0; t < mesh.n_triangles(); ++t) {
      const ElementPoints pts = rules.at(mesh, t);
      const LocalField uh = evaluate_local(sol.scalar, sol.u, t, pts.basis[0]);
      const double h = mesh.triangle(t).diameter;
      double s = 0.0;
      for (std::size_t q = 0; q < pts.size(); ++q) {
        const Vec2 x = pts.x[q];
        const double r = dot(problem.beta(x), uh.gradients[q]) + reaction_mu(problem, x, h) * uh.scalars[q] - problem.f(x);
        s += pts.w[q] * r * r;
      }
      out[static_cast<std::size_t>(t)].balance = s;
    }
    return out;
  }

  const ElementRules rules(degree, {sol.flux.space, sol.scalar.space}, problem.discontinuity);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const ElementPoints pts = rules.at(mesh, t);
    const LocalField sh = evaluate_local(sol.flux, sol.sigma, t, pts.basis[0]);
    const LocalField uh = evaluate_local(sol.scalar, sol.u, t, pts.basis[1]);
    auto& terms = out[static_cast<std::size_t>(t)];
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const Vec2 x = pts.x[q];
      const double w = pts.w[q];
      const Vec2 r1 = sh.vectors[q] - uh.scalars[q] * problem.beta(x);
      const double r2 = sh.divergences[q] + problem.gamma(x) * uh.scalars[q] - problem.f(x);
      terms.constitutive += w * dot(r1, r1);
      terms.balance += w * r2 * r2;
    }
  }

  if (sol.method.weak_inflow()) {
    const auto& seg = quadrature(QuadDomain::segment, edge_degree(sol.k));
    for (Index e = 0; e < mesh.n_edges(); ++e) {
      const auto& edge = mesh.edge(e);
      if (edge.boundary_class != BoundaryClass::inflow) continue;
      const Index t = edge.triangles[0];
      const auto geo = ElementGeometry::of(mesh, t);
      const Vec2 lo = mesh.vertex(edge.vertices[0]);
      const Vec2 hi = mesh.vertex(edge.vertices[1]);
      double s = 0.0;
      for (std::size_t q = 0; q < seg.size(); ++q) {
        const Vec2 x = lo + seg.points[q].x * (hi - lo);
        const Vec2 ref_pt = to_reference(geo, x);
        const BasisEval basis = piola_map(geo, reference_basis(sol.flux.space, std::span<const Vec2>(&ref_pt, 1)));
        const LocalField sh = evaluate_local(sol.flux, sol.sigma, t, basis);
        const double beta_n = dot(problem.beta(x), edge.normal);
        const double r = dot(sh.vectors[0], edge.normal) - beta_n * problem.g(x);
        s += seg.weights[q] * edge.length * inflow_weight(sol.method, edge.length, beta_n) * r * r;
      }
      out[static_cast<std::size_t>(t)].boundary += s;
    }
  }
  return out;
}

double ls_functional(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem) {
  double s = 0.0;
  for (const auto& t : element_residuals(mesh, sol, problem)) s += t.total();
  return s;
}

double ls_functional_algebraic(const LinearSystem& sys, std::span<const double> x) {
  const auto ax = sys.matrix.multiply(x);
  return dot(x, ax) - 2.0 * dot(sys.load, x) + sys.constant;
}

std::vector<Vec2> cell_average_flux(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem) {
  const auto& rule = quadrature(QuadDomain::triangle, 4);
  std::vector<Vec2> out(static_cast<std::size_t>(mesh.n_triangles()));
  const BasisEval ref = reference_basis(sol.method.uses_flux() ? sol.flux.space : sol.scalar.space, rule.points);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto geo = ElementGeometry::of(mesh, t);
    Vec2 s{};
    if (sol.method.uses_flux()) {
      const LocalField f = evaluate_local(sol.flux, sol.sigma, t, piola_map(geo, ref));
      for (std::size_t q = 0; q < rule.size(); ++q) s += 2.0 * rule.weights[q] * f.vectors[q];
    } else {
      const LocalField f = evaluate_local(sol.scalar, sol.u, t, piola_map(geo, ref));
      for (std::size_t q = 0; q < rule.size(); ++q) s += 2.0 * rule.weights[q] * f.scalars[q] * problem.beta(geo.map(rule.points[q]));
    }
    out[static_cast<std::size_t>(t)] = s;
  }
  return out;
}

std::vector<double> cell_average_u(const Mesh& mesh, const DiscreteSolution& sol) {
  std::vector<double> out(static_cast<std::size_t>(mesh.n_triangles()));
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto ids = sol.scalar.dofs(t);
    double s = 0.0;
    for (Index id : ids) s += sol.u[static_cast<std::size_t>(id)];
    // The mean of a linear function is the mean of its vertex values.
    out[static_cast<std::size_t>(t)] = s / static_cast<double>(ids.size());
  }
  return out;
}

}  // namespace fluxls
