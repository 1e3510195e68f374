#include <Eigen/Dense>

#include "fluxls/quadrature.hpp"
#include "fluxls/spaces.hpp"

namespace fluxls {

std::array<double, 2> edge_moments(const Mesh& mesh, Index edge, const ScalarField& normal_flux, int k) {
  const auto& e = mesh.edge(edge);
  const Vec2 lo = mesh.vertex(e.vertices[0]);
  const Vec2 hi = mesh.vertex(e.vertices[1]);
  const auto& rule = quadrature(QuadDomain::segment, 2 * k + 5);
  std::array<double, 2> m{0.0, 0.0};
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q].x;
    const double w = rule.weights[q] * e.length;
    const double f = normal_flux(lo + s * (hi - lo));
    m[0] += w * f;
    if (k >= 1) m[1] += w * f * (2.0 * s - 1.0);
  }
  return m;
}

std::vector<double> interpolate_rt(const Mesh& mesh, const VectorField& field, int k) {
  const DofMap map = make_dofmap(mesh, flux_space(k));
  std::vector<double> coeffs(static_cast<std::size_t>(map.n_global), 0.0);
  const int per_edge = k == 0 ? 1 : 2;
  for (Index e = 0; e < mesh.n_edges(); ++e) {
    const Vec2 n = mesh.edge(e).normal;
    const auto m = edge_moments(mesh, e, [&](const Vec2& x) { return dot(field(x), n); }, k);
    for (int j = 0; j < per_edge; ++j) coeffs[static_cast<std::size_t>(per_edge * e + j)] = m[static_cast<std::size_t>(j)];
  }
  if (k == 1) {
    const auto& rule = quadrature(QuadDomain::triangle, 2 * k + 4);
    for (Index t = 0; t < mesh.n_triangles(); ++t) {
      const auto geo = ElementGeometry::of(mesh, t);
      const Vec2 gx = geo.apply_inverse_transpose({1.0, 0.0});
      const Vec2 gy = geo.apply_inverse_transpose({0.0, 1.0});
      double mx = 0.0, my = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 v = field(geo.map(rule.points[q]));
        const double w = rule.weights[q] * geo.det;
        mx += w * dot(v, gx);
        my += w * dot(v, gy);
      }
      const auto ids = map.dofs(t);
      coeffs[static_cast<std::size_t>(ids[6])] = mx;
      coeffs[static_cast<std::size_t>(ids[7])] = my;
    }
  }
  return coeffs;
}

std::vector<double> project_l2(const Mesh& mesh, const ScalarField& field, int k) {
  const auto& rule = quadrature(QuadDomain::triangle, kMaxTriangleDegree);
  if (k == 0) {
    std::vector<double> c(static_cast<std::size_t>(mesh.n_triangles()));
    for (Index t = 0; t < mesh.n_triangles(); ++t) {
      const auto geo = ElementGeometry::of(mesh, t);
      double s = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * field(geo.map(rule.points[q]));
      // weights sum to 1/2 = |Khat|
      c[static_cast<std::size_t>(t)] = 2.0 * s;
    }
    return c;
  }
  if (k != 1) throw std::invalid_argument("project_l2 supports k = 0 or 1");

  const BasisEval ref = reference_basis(SpaceKind::P1dg, rule.points);
  Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) mass(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += rule.weights[q] * ref.scalar(q, i) * ref.scalar(q, j);
    }
  }
  const Eigen::Matrix3d inv = mass.inverse();
  std::vector<double> c(3 * static_cast<std::size_t>(mesh.n_triangles()));
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto geo = ElementGeometry::of(mesh, t);
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double f = field(geo.map(rule.points[q]));
      for (std::size_t i = 0; i < 3; ++i) rhs(static_cast<Eigen::Index>(i)) += rule.weights[q] * f * ref.scalar(q, i);
    }
    // The Jacobian determinant cancels between mass matrix and right-hand side.
    const Eigen::Vector3d x = inv * rhs;
    for (std::size_t i = 0; i < 3; ++i) c[3 * static_cast<std::size_t>(t) + i] = x(static_cast<Eigen::Index>(i));
  }
  return c;
}

std::vector<double> interpolate_p1c(const Mesh& mesh, const ScalarField& field) {
  std::vector<double> c(static_cast<std::size_t>(mesh.n_vertices()));
  for (Index v = 0; v < mesh.n_vertices(); ++v) c[static_cast<std::size_t>(v)] = field(mesh.vertex(v));
  return c;
}

}  // namespace fluxls
