#include "fluxls/spaces.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fluxls/quadrature.hpp"

namespace fluxls {

namespace {

constexpr std::array<Vec2, 3> kRefCorners{Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};

// Outward unit normals and lengths of the reference edges.
const std::array<Vec2, 3> kRefNormals{Vec2{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, Vec2{-1.0, 0.0},
                                      Vec2{0.0, -1.0}};
const std::array<double, 3> kRefLengths{std::sqrt(2.0), 1.0, 1.0};

// Monomial spanning set of RT1 = P1^2 + x P1.
std::array<Vec2, 8> rt1_monomials(const Vec2& p) {
  const double x = p.x, y = p.y;
  return {Vec2{1, 0}, Vec2{x, 0}, Vec2{y, 0}, Vec2{0, 1}, Vec2{0, x}, Vec2{0, y}, Vec2{x * x, x * y},
          Vec2{x * y, y * y}};
}

std::array<double, 8> rt1_monomial_divergences(const Vec2& p) {
  const double x = p.x, y = p.y;
  // div(x^2, xy) = 3x, div(xy, y^2) = 3y
  return {0, 1, 0, 0, 0, 1, 3 * x, 3 * y};
}

// Coefficients C with phi_i = sum_m C(m, i) M_m, the inverse of the dof
// matrix D(dof, m) = dof(M_m).
const Eigen::Matrix<double, 8, 8>& rt1_coefficients() {
  static const Eigen::Matrix<double, 8, 8> coeffs = [] {
    Eigen::Matrix<double, 8, 8> d = Eigen::Matrix<double, 8, 8>::Zero();
    const auto& seg = quadrature(QuadDomain::segment, 5);
    for (int e = 0; e < 3; ++e) {
      const Vec2 a = kRefCorners[static_cast<std::size_t>((e + 1) % 3)];
      const Vec2 b = kRefCorners[static_cast<std::size_t>((e + 2) % 3)];
      for (std::size_t q = 0; q < seg.size(); ++q) {
        const double t = seg.points[q].x;
        const double w = seg.weights[q] * kRefLengths[static_cast<std::size_t>(e)];
        const auto m = rt1_monomials(a + t * (b - a));
        for (int k = 0; k < 8; ++k) {
          const double flux = dot(m[static_cast<std::size_t>(k)], kRefNormals[static_cast<std::size_t>(e)]);
          d(2 * e, k) += w * flux;
          d(2 * e + 1, k) += w * flux * (2.0 * t - 1.0);
        }
      }
    }
    const auto& tri = quadrature(QuadDomain::triangle, 4);
    for (std::size_t q = 0; q < tri.size(); ++q) {
      const auto m = rt1_monomials(tri.points[q]);
      for (int k = 0; k < 8; ++k) {
        d(6, k) += tri.weights[q] * m[static_cast<std::size_t>(k)].x;
        d(7, k) += tri.weights[q] * m[static_cast<std::size_t>(k)].y;
      }
    }
    return Eigen::Matrix<double, 8, 8>(d.inverse());
  }();
  return coeffs;
}

}  // namespace

std::string to_string(SpaceKind s) {
  switch (s) {
    case SpaceKind::RT0: return "RT0";
    case SpaceKind::RT1: return "RT1";
    case SpaceKind::P0: return "P0";
    case SpaceKind::P1dg: return "P1dg";
    case SpaceKind::P1c: return "P1c";
  }
  return "unknown";
}

bool is_flux_space(SpaceKind s) { return s == SpaceKind::RT0 || s == SpaceKind::RT1; }

int polynomial_order(SpaceKind s) {
  return (s == SpaceKind::RT0 || s == SpaceKind::P0) ? 0 : 1;
}

int local_dimension(SpaceKind s) {
  switch (s) {
    case SpaceKind::RT0: return 3;
    case SpaceKind::RT1: return 8;
    case SpaceKind::P0: return 1;
    case SpaceKind::P1dg:
    case SpaceKind::P1c: return 3;
  }
  return 0;
}

SpaceKind flux_space(int k) {
  if (k == 0) return SpaceKind::RT0;
  if (k == 1) return SpaceKind::RT1;
  throw std::invalid_argument("unsupported order " + std::to_string(k));
}

SpaceKind scalar_space(int k) {
  if (k == 0) return SpaceKind::P0;
  if (k == 1) return SpaceKind::P1dg;
  throw std::invalid_argument("unsupported order " + std::to_string(k));
}

BasisEval reference_basis(SpaceKind space, std::span<const Vec2> points) {
  BasisEval out;
  out.space = space;
  out.n_points = points.size();
  out.n_basis = static_cast<std::size_t>(local_dimension(space));
  const std::size_t total = out.n_points * out.n_basis;

  switch (space) {
    case SpaceKind::RT0: {
      out.vectors.resize(total);
      out.divergences.resize(total);
      for (std::size_t q = 0; q < points.size(); ++q) {
        for (std::size_t i = 0; i < 3; ++i) {
          // (x - v_i) / (2 |K|) with |K| = 1/2
          out.vectors[q * 3 + i] = points[q] - kRefCorners[i];
          out.divergences[q * 3 + i] = 2.0;
        }
      }
      break;
    }
    case SpaceKind::RT1: {
      out.vectors.resize(total);
      out.divergences.resize(total);
      const auto& c = rt1_coefficients();
      for (std::size_t q = 0; q < points.size(); ++q) {
        const auto m = rt1_monomials(points[q]);
        const auto dm = rt1_monomial_divergences(points[q]);
        for (int i = 0; i < 8; ++i) {
          Vec2 v{};
          double dv = 0.0;
          for (int k = 0; k < 8; ++k) {
            v += c(k, i) * m[static_cast<std::size_t>(k)];
            dv += c(k, i) * dm[static_cast<std::size_t>(k)];
          }
          out.vectors[q * 8 + static_cast<std::size_t>(i)] = v;
          out.divergences[q * 8 + static_cast<std::size_t>(i)] = dv;
        }
      }
      break;
    }
    case SpaceKind::P0: {
      out.scalars.assign(total, 1.0);
      out.gradients.assign(total, Vec2{});
      break;
    }
    case SpaceKind::P1dg:
    case SpaceKind::P1c: {
      out.scalars.resize(total);
      out.gradients.resize(total);
      for (std::size_t q = 0; q < points.size(); ++q) {
        const double x = points[q].x, y = points[q].y;
        out.scalars[q * 3 + 0] = 1.0 - x - y;
        out.scalars[q * 3 + 1] = x;
        out.scalars[q * 3 + 2] = y;
        out.gradients[q * 3 + 0] = {-1.0, -1.0};
        out.gradients[q * 3 + 1] = {1.0, 0.0};
        out.gradients[q * 3 + 2] = {0.0, 1.0};
      }
      break;
    }
  }
  return out;
}

ElementGeometry ElementGeometry::of(const Mesh& mesh, Index tri) {
  ElementGeometry g;
  g.corners = mesh.corners(tri);
  const Vec2 e1 = g.corners[1] - g.corners[0];
  const Vec2 e2 = g.corners[2] - g.corners[0];
  g.jacobian = {e1.x, e2.x, e1.y, e2.y};
  g.det = cross(e1, e2);
  const auto& t = mesh.triangle(tri);
  g.edge_signs = t.edge_signs;
  g.edge_orientation = t.edge_orientation;
  return g;
}

ElementGeometry ElementGeometry::reference() {
  ElementGeometry g;
  g.corners = kRefCorners;
  g.jacobian = {1.0, 0.0, 0.0, 1.0};
  g.det = 1.0;
  return g;
}

Vec2 ElementGeometry::map(const Vec2& ref) const { return corners[0] + apply_jacobian(ref); }

Vec2 ElementGeometry::apply_jacobian(const Vec2& v) const {
  return {jacobian[0] * v.x + jacobian[1] * v.y, jacobian[2] * v.x + jacobian[3] * v.y};
}

Vec2 ElementGeometry::apply_inverse_transpose(const Vec2& v) const {
  // J^{-T} = (1/det) [[d, -c], [-b, a]] for J = [[a, b], [c, d]]
  const double a = jacobian[0], b = jacobian[1], c = jacobian[2], d = jacobian[3];
  return {(d * v.x - c * v.y) / det, (-b * v.x + a * v.y) / det};
}

std::array<int, 8> local_signs(SpaceKind space, const ElementGeometry& geo) {
  std::array<int, 8> s{1, 1, 1, 1, 1, 1, 1, 1};
  if (space == SpaceKind::RT0) {
    for (std::size_t i = 0; i < 3; ++i) s[i] = geo.edge_signs[i];
  } else if (space == SpaceKind::RT1) {
    for (std::size_t e = 0; e < 3; ++e) {
      s[2 * e] = geo.edge_signs[e];
      s[2 * e + 1] = geo.edge_signs[e] * geo.edge_orientation[e];
    }
  }
  return s;
}

BasisEval piola_map(const ElementGeometry& geo, const BasisEval& ref) {
  if (!(std::abs(geo.det) > 0.0) || !std::isfinite(geo.det)) {
    throw std::domain_error("singular element Jacobian");
  }
  BasisEval out = ref;
  if (is_flux_space(ref.space)) {
    const auto s = local_signs(ref.space, geo);
    for (std::size_t q = 0; q < ref.n_points; ++q) {
      for (std::size_t i = 0; i < ref.n_basis; ++i) {
        const std::size_t k = q * ref.n_basis + i;
        const double f = s[i] / geo.det;
        out.vectors[k] = f * geo.apply_jacobian(ref.vectors[k]);
        out.divergences[k] = f * ref.divergences[k];
      }
    }
  } else {
    for (auto& g : out.gradients) g = geo.apply_inverse_transpose(g);
  }
  return out;
}

LocalField evaluate_local(const DofMap& dofs, std::span<const double> coeffs, Index tri,
                          const BasisEval& physical) {
  LocalField f;
  const auto ids = dofs.dofs(tri);
  const std::size_t nq = physical.n_points;
  if (is_flux_space(dofs.space)) {
    f.vectors.assign(nq, Vec2{});
    f.divergences.assign(nq, 0.0);
    for (std::size_t q = 0; q < nq; ++q) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const double c = coeffs[static_cast<std::size_t>(ids[i])];
        f.vectors[q] += c * physical.vector(q, i);
        f.divergences[q] += c * physical.divergence(q, i);
      }
    }
  } else {
    f.scalars.assign(nq, 0.0);
    f.gradients.assign(nq, Vec2{});
    for (std::size_t q = 0; q < nq; ++q) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const double c = coeffs[static_cast<std::size_t>(ids[i])];
        f.scalars[q] += c * physical.scalar(q, i);
        f.gradients[q] += c * physical.gradient(q, i);
      }
    }
  }
  return f;
}

}  // namespace fluxls
