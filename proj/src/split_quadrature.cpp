#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluxls/errors.hpp"
#include "fluxls/quadrature.hpp"

namespace fluxls {

namespace {

using Polygon = std::vector<Vec2>;

// Keep the part of a convex polygon with dot(n, p) <= c.
Polygon clip(const Polygon& poly, const Vec2& n, double c) {
  Polygon out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    const double da = dot(n, a) - c, db = dot(n, b) - c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) out.push_back(a + (da / (da - db)) * (b - a));
  }
  return out;
}

double polygon_area(const Polygon& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * s;
}

struct HalfPlane {
  Vec2 n;
  double c;
};

// Inside half-planes of a counterclockwise convex polygon.
std::vector<HalfPlane> half_planes(const Polygon& p) {
  std::vector<HalfPlane> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 a = p[i], b = p[(i + 1) % p.size()];
    const Vec2 d = b - a;
    const Vec2 n{d.y, -d.x};  // outward for ccw order
    out.push_back({n, dot(n, a)});
  }
  return out;
}

// Pieces of triangle T inside and outside a circle whose center is not in the
// interior of T.
void split_circle(const Polygon& tri, const Vec2& center, double radius, std::vector<Polygon>& pieces) {
  Vec2 mid{};
  for (const auto& v : tri) mid += v / 3.0;
  const double ref_angle = std::atan2(mid.y - center.y, mid.x - center.x);
  double lo = 0.0, hi = 0.0;
  for (const auto& v : tri) {
    const Vec2 d = v - center;
    if (norm(d) < 1e-14) continue;
    double phi = std::atan2(d.y, d.x) - ref_angle;
    while (phi > std::numbers::pi) phi -= 2.0 * std::numbers::pi;
    while (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
    lo = std::min(lo, phi);
    hi = std::max(hi, phi);
  }
  lo -= 1e-9;
  hi += 1e-9;
  constexpr int kChords = 8;
  Polygon slice{center};
  for (int j = 0; j <= kChords; ++j) {
    const double a = ref_angle + lo + (hi - lo) * j / kChords;
    slice.push_back(center + radius * Vec2{std::cos(a), std::sin(a)});
  }
  const auto planes = half_planes(slice);
  Polygon inside = tri;
  for (const auto& h : planes) inside = clip(inside, h.n, h.c);
  pieces.push_back(inside);
  // The complement of the slice is the disjoint union over i of
  // H_1 n ... n H_{i-1} n (not H_i).
  Polygon prefix = tri;
  for (const auto& h : planes) {
    pieces.push_back(clip(prefix, -1.0 * h.n, -h.c));
    prefix = clip(prefix, h.n, h.c);
    if (prefix.size() < 3) break;
  }
}

bool strictly_inside_or_on_edge(const Polygon& tri, const Vec2& p) {
  // p in the closed triangle but not one of its vertices.
  for (const auto& v : tri) {
    if (distance(v, p) < 1e-14) return false;
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (cross(tri[(i + 1) % 3] - tri[i], p - tri[i]) < -1e-15) return false;
  }
  return true;
}

double point_triangle_distance(const std::array<Vec2, 3>& c, const Vec2& p) {
  bool inside = true;
  for (std::size_t i = 0; i < 3; ++i) {
    if (cross(c[(i + 1) % 3] - c[i], p - c[i]) < 0.0) inside = false;
  }
  if (inside) return 0.0;
  double best = 1e300;
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec2 a = c[i], d = c[(i + 1) % 3] - c[i];
    const double s = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
    best = std::min(best, distance(p, a + s * d));
  }
  return best;
}

}  // namespace

bool is_cut(const std::array<Vec2, 3>& corners, const Discontinuity& d) {
  double scale = 0.0;
  for (const auto& v : corners) scale = std::max(scale, distance(v, corners[0]));
  const double tol = 1e-12 * std::max(scale, 1e-300);
  if (d.kind == Discontinuity::Kind::line) {
    bool pos = false, neg = false;
    for (const auto& v : corners) {
      const double l = d.level(v);
      pos = pos || l > tol;
      neg = neg || l < -tol;
    }
    return pos && neg;
  }
  double far = 0.0;
  for (const auto& v : corners) far = std::max(far, distance(v, d.point));
  const double near = point_triangle_distance(corners, d.point);
  return near < d.radius - tol && far > d.radius + tol;
}

std::vector<ElementPoint> element_quadrature(const Mesh& mesh, Index tri, int degree,
                                             const std::optional<Discontinuity>& disc) {
  const auto corners = mesh.corners(tri);
  const ElementGeometry geo = ElementGeometry::of(mesh, tri);
  const QuadratureRule rule = degree <= kMaxTriangleDegree ? quadrature(QuadDomain::triangle, degree)
                                                           : collapsed_triangle_rule(degree);
  std::vector<ElementPoint> out;

  std::vector<Polygon> pieces;
  const Polygon tpoly(corners.begin(), corners.end());
  if (disc && is_cut(corners, *disc)) {
    if (disc->kind == Discontinuity::Kind::line) {
      const Vec2 dir = disc->direction / norm(disc->direction);
      const Vec2 n{-dir.y, dir.x};  // level = dot(n, p - point)
      const double c = dot(n, disc->point);
      pieces.push_back(clip(tpoly, n, c));
      pieces.push_back(clip(tpoly, -1.0 * n, -c));
    } else if (strictly_inside_or_on_edge(tpoly, disc->point)) {
      for (std::size_t i = 0; i < 3; ++i) {
        const Polygon sub{disc->point, corners[i], corners[(i + 1) % 3]};
        if (polygon_area(sub) > 1e-14 * geo.area()) split_circle(sub, disc->point, disc->radius, pieces);
      }
    } else {
      split_circle(tpoly, disc->point, disc->radius, pieces);
    }
  } else {
    pieces.push_back(tpoly);
  }

  const double a = geo.jacobian[0], b = geo.jacobian[1], c = geo.jacobian[2], e = geo.jacobian[3];
  for (const auto& poly : pieces) {
    if (poly.size() < 3) continue;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
      const Vec2 p0 = poly[0], e1 = poly[i] - p0, e2 = poly[i + 1] - p0;
      const double jac = cross(e1, e2);
      if (!(jac > 0.0)) continue;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 x = p0 + rule.points[q].x * e1 + rule.points[q].y * e2;
        const Vec2 d = x - geo.corners[0];
        const Vec2 ref{(e * d.x - b * d.y) / geo.det, (-c * d.x + a * d.y) / geo.det};
        out.push_back({ref, x, rule.weights[q] * jac});
      }
    }
  }
  return out;
}

}  // namespace fluxls
