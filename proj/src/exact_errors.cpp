#include <cmath>
#include <limits>

#include "fluxls/errors.hpp"
#include "fluxls/quadrature.hpp"

namespace fluxls {

std::vector<ElementErrors> exact_error_elements(const Mesh& mesh, const DiscreteSolution& sol,
                                                const ProblemSpec& problem, int degree) {
  if (!problem.has_exact()) throw ProblemError("problem '" + problem.name + "' has no exact solution");
  std::vector<ElementErrors> out(static_cast<std::size_t>(mesh.n_triangles()));
  const bool flux = sol.method.uses_flux();

  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto pts = element_quadrature(mesh, t, degree, problem.discontinuity);
    std::vector<Vec2> refs;
    refs.reserve(pts.size());
    for (const auto& p : pts) refs.push_back(p.ref);
    const auto geo = ElementGeometry::of(mesh, t);
    auto& err = out[static_cast<std::size_t>(t)];
    if (flux) {
      const LocalField sh = evaluate_local(sol.flux, sol.sigma, t, piola_map(geo, reference_basis(sol.flux.space, refs)));
      const LocalField uh =
          evaluate_local(sol.scalar, sol.u, t, piola_map(geo, reference_basis(sol.scalar.space, refs)));
      for (std::size_t q = 0; q < pts.size(); ++q) {
        const Vec2 x = pts[q].x;
        const double w = pts[q].weight;
        const double eu = problem.exact_u(x) - uh.scalars[q];
        const Vec2 es = problem.exact_sigma(x) - sh.vectors[q];
        const double ed = problem.exact_div_sigma(x) - sh.divergences[q];
        const Vec2 r1 = es - eu * problem.beta(x);
        const double r2 = ed + problem.gamma(x) * eu;
        err.l2_u += w * eu * eu;
        err.l2_sigma += w * dot(es, es);
        err.div_sigma += w * ed * ed;
        err.ls += w * (dot(r1, r1) + r2 * r2);
      }
    } else {
      const LocalField uh =
          evaluate_local(sol.scalar, sol.u, t, piola_map(geo, reference_basis(SpaceKind::P1c, refs)));
      const double h = mesh.triangle(t).diameter;
      for (std::size_t q = 0; q < pts.size(); ++q) {
        const Vec2 x = pts[q].x;
        const double w = pts[q].weight;
        const double eu = problem.exact_u(x) - uh.scalars[q];
        const Vec2 es = problem.exact_sigma(x) - uh.scalars[q] * problem.beta(x);
        const double r =
            dot(problem.beta(x), uh.gradients[q]) + reaction_mu(problem, x, h) * uh.scalars[q] - problem.f(x);
        err.l2_u += w * eu * eu;
        err.l2_sigma += w * dot(es, es);
        err.div_sigma = std::numeric_limits<double>::quiet_NaN();
        err.ls += w * r * r;
      }
    }
  }

  if (sol.method.weak_inflow()) {
    const QuadratureRule seg = quadrature(QuadDomain::segment, kMaxSegmentDegree);
    for (Index e = 0; e < mesh.n_edges(); ++e) {
      const auto& edge = mesh.edge(e);
      if (edge.boundary_class != BoundaryClass::inflow) continue;
      const Index t = edge.triangles[0];
      const auto geo = ElementGeometry::of(mesh, t);
      const Vec2 lo = mesh.vertex(edge.vertices[0]);
      const Vec2 hi = mesh.vertex(edge.vertices[1]);
      std::vector<Vec2> refs;
      std::vector<Vec2> xs;
      for (std::size_t q = 0; q < seg.size(); ++q) {
        const Vec2 x = lo + seg.points[q].x * (hi - lo);
        const Vec2 d = x - geo.corners[0];
        const auto& j = geo.jacobian;
        refs.push_back({(j[3] * d.x - j[1] * d.y) / geo.det, (-j[2] * d.x + j[0] * d.y) / geo.det});
        xs.push_back(x);
      }
      const LocalField sh = evaluate_local(sol.flux, sol.sigma, t, piola_map(geo, reference_basis(sol.flux.space, refs)));
      double s = 0.0;
      for (std::size_t q = 0; q < seg.size(); ++q) {
        const double beta_n = dot(problem.beta(xs[q]), edge.normal);
        const double r = dot(problem.exact_sigma(xs[q]) - sh.vectors[q], edge.normal);
        s += seg.weights[q] * edge.length * inflow_weight(sol.method, edge.length, beta_n) * r * r;
      }
      out[static_cast<std::size_t>(t)].ls += s;
    }
  }
  return out;
}

ErrorReport exact_errors(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem, int degree) {
  double u = 0.0, s = 0.0, d = 0.0, ls = 0.0;
  for (const auto& e : exact_error_elements(mesh, sol, problem, degree)) {
    u += e.l2_u;
    s += e.l2_sigma;
    d += e.div_sigma;
    ls += e.ls;
  }
  ErrorReport r;
  r.l2_u = std::sqrt(u);
  r.l2_sigma = std::sqrt(s);
  r.hdiv_sigma = std::sqrt(s + d);
  r.ls_norm = std::sqrt(ls);
  return r;
}

}  // namespace fluxls
