#include <algorithm>
#include <cmath>
#include <numbers>

#include "fluxls/problem.hpp"

namespace fluxls {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ScalarField constant(double c) {
  return [c](const Vec2&) { return c; };
}

VectorField constant(Vec2 c) {
  return [c](const Vec2&) { return c; };
}

// sigma = beta u for the exact solution.
VectorField flux_of(VectorField beta, ScalarField u) {
  return [beta = std::move(beta), u = std::move(u)](const Vec2& p) { return u(p) * beta(p); };
}

void finish(ProblemSpec& p, Mesh mesh) {
  p.initial_mesh = classify_boundary(std::move(mesh), p.beta);
  if (!p.g && p.exact_u) p.g = p.exact_u;
  if (!p.exact_sigma && p.exact_u) p.exact_sigma = flux_of(p.beta, p.exact_u);
}

ProblemSpec pwc_aligned() {
  ProblemSpec p;
  p.name = "pwc_aligned";
  p.beta = constant(Vec2{kInvSqrt2, kInvSqrt2});
  p.div_beta = constant(0.0);
  p.gamma = constant(1.0);
  p.exact_u = [](const Vec2& x) { return x.y > x.x ? 1.0 : 0.0; };
  // beta . grad u = 0 away from y = x, so f = gamma u = u.
  p.f = p.exact_u;
  p.exact_div_sigma = constant(0.0);
  p.g_jump_points = {Vec2{0.0, 0.0}};
  p.exact_u_bounds = std::array<double, 2>{0.0, 1.0};
  p.discontinuity = Discontinuity{Discontinuity::Kind::line, {0.0, 0.0}, {1.0, 1.0}, 0.0};
  p.beta_sup = 1.0;
  p.gamma_sup = 1.0;
  finish(p, unit_square_mesh());
  return p;
}

ProblemSpec smooth() {
  ProblemSpec p;
  p.name = "smooth";
  p.beta = constant(Vec2{1.0, 1.0});
  p.div_beta = constant(0.0);
  p.gamma = constant(1.0);
  p.exact_u = [](const Vec2& x) { return std::sin(x.x + x.y); };
  p.f = [](const Vec2& x) { return 2.0 * std::cos(x.x + x.y) + std::sin(x.x + x.y); };
  p.exact_div_sigma = [](const Vec2& x) { return 2.0 * std::cos(x.x + x.y); };
  p.exact_u_bounds = std::array<double, 2>{0.0, 1.0};
  p.beta_sup = std::sqrt(2.0);
  p.gamma_sup = 1.0;
  finish(p, unit_square_mesh());
  return p;
}

ProblemSpec peterson() {
  ProblemSpec p;
  p.name = "peterson";
  p.beta = constant(Vec2{0.0, 1.0});
  p.div_beta = constant(0.0);
  p.gamma = constant(0.0);
  p.f = constant(0.0);
  p.exact_u = [](const Vec2& x) { return x.x; };
  p.exact_div_sigma = constant(0.0);
  p.exact_u_bounds = std::array<double, 2>{0.0, 1.0};
  p.beta_sup = 1.0;
  p.gamma_sup = 0.0;
  finish(p, peterson_mesh(6));
  const VectorField beta = p.beta;
  p.mesh_family = [beta](int level) { return classify_boundary(peterson_mesh(6 << level), beta); };
  return p;
}

ProblemSpec pws_aligned() {
  ProblemSpec p;
  p.name = "pws_aligned";
  p.beta = constant(Vec2{kInvSqrt2, kInvSqrt2});
  p.div_beta = constant(0.0);
  p.gamma = constant(1.0);
  p.exact_u = [](const Vec2& x) { return x.y > x.x ? std::sin(x.x + x.y) : std::cos(x.x + x.y); };
  // beta . grad sin(x+y) = sqrt(2) cos(x+y), beta . grad cos(x+y) = -sqrt(2) sin(x+y)
  p.exact_div_sigma = [](const Vec2& x) {
    return x.y > x.x ? std::sqrt(2.0) * std::cos(x.x + x.y) : -std::sqrt(2.0) * std::sin(x.x + x.y);
  };
  p.f = [div = p.exact_div_sigma, u = p.exact_u](const Vec2& x) { return div(x) + u(x); };
  p.g_jump_points = {Vec2{0.0, 0.0}};
  // cos(x+y) below the diagonal reaches cos 2 at (1,1).
  p.exact_u_bounds = std::array<double, 2>{std::cos(2.0), 1.0};
  p.discontinuity = Discontinuity{Discontinuity::Kind::line, {0.0, 0.0}, {1.0, 1.0}, 0.0};
  p.beta_sup = 1.0;
  p.gamma_sup = 1.0;
  finish(p, unit_square_mesh());
  return p;
}

ProblemSpec pwc_nonmatching() {
  ProblemSpec p;
  p.name = "pwc_nonmatching";
  p.beta = constant(Vec2{0.0, 1.0});
  p.div_beta = constant(0.0);
  p.gamma = constant(0.0);
  p.f = constant(0.0);
  p.exact_u = [](const Vec2& x) { return x.x > kPi / 3.0 ? 1.0 : 0.0; };
  p.exact_div_sigma = constant(0.0);
  p.g_jump_points = {Vec2{kPi / 3.0, 0.0}};
  p.exact_u_bounds = std::array<double, 2>{0.0, 1.0};
  p.discontinuity = Discontinuity{Discontinuity::Kind::line, {kPi / 3.0, 0.0}, {0.0, 1.0}, 0.0};
  p.beta_sup = 1.0;
  p.gamma_sup = 0.0;
  finish(p, rectangle_pi_mesh());
  return p;
}

ProblemSpec pws_nonmatching() {
  ProblemSpec p;
  p.name = "pws_nonmatching";
  const double c = std::cos(0.125), s = std::sin(0.125), t = std::tan(0.125);
  p.beta = constant(Vec2{c, s});
  p.div_beta = constant(0.0);
  p.gamma = constant(1.0);
  p.exact_u = [t](const Vec2& x) { return x.y > t * x.x ? std::sin(x.x + x.y) : std::cos(x.x + x.y); };
  p.exact_div_sigma = [c, s, t](const Vec2& x) {
    return x.y > t * x.x ? (c + s) * std::cos(x.x + x.y) : -(c + s) * std::sin(x.x + x.y);
  };
  p.f = [div = p.exact_div_sigma, u = p.exact_u](const Vec2& x) { return div(x) + u(x); };
  p.g_jump_points = {Vec2{0.0, 0.0}};
  p.exact_u_bounds = std::array<double, 2>{0.0, 1.0};
  p.discontinuity = Discontinuity{Discontinuity::Kind::line, {0.0, 0.0}, {c, s}, 0.0};
  p.beta_sup = 1.0;
  p.gamma_sup = 1.0;
  finish(p, unit_square_mesh());
  return p;
}

VectorField rotation_field(Vec2 center) {
  // (y - cy, -(x - cx)) / r: clockwise unit field around center.
  return [center](const Vec2& x) {
    const Vec2 d = x - center;
    const double r = norm(d);
    if (r == 0.0) return Vec2{0.0, 0.0};
    return Vec2{d.y / r, -d.x / r};
  };
}

ProblemSpec curved(bool minus_one_inside) {
  ProblemSpec p;
  const double inner = minus_one_inside ? -1.0 : 0.0;
  p.name = minus_one_inside ? "curved_m11" : "curved_01";
  p.beta = rotation_field({0.0, 0.0});
  p.div_beta = constant(0.0);
  p.gamma = constant(0.0);
  p.f = constant(0.0);
  p.exact_u = [inner](const Vec2& x) { return x.x * x.x + x.y * x.y > 0.25 ? 1.0 : inner; };
  p.exact_div_sigma = constant(0.0);
  p.g_jump_points = {Vec2{-0.5, 0.0}};
  p.exact_u_bounds = std::array<double, 2>{inner, 1.0};
  p.discontinuity = Discontinuity{Discontinuity::Kind::circle, {0.0, 0.0}, {}, 0.5};
  p.beta_sup = 1.0;
  p.gamma_sup = 0.0;
  finish(p, half_disk_mesh());
  return p;
}

}  // namespace

double Discontinuity::level(const Vec2& p) const {
  if (kind == Kind::line) return cross(direction, p - point) / norm(direction);
  return norm(p - point) - radius;
}

ProblemSpec make_layer_problem(double eps) {
  if (!(eps > 0.0)) throw ProblemError("layer width must be positive");
  ProblemSpec p;
  p.name = "layer";
  constexpr double gamma = 0.1;
  const Vec2 center{0.0, -1.0};
  p.beta = rotation_field(center);
  p.div_beta = constant(0.0);
  p.gamma = constant(gamma);
  p.f = constant(0.0);
  p.exact_u = [eps, center](const Vec2& x) {
    const double r = norm(x - center);
    return 0.25 * std::exp(gamma * r * std::asin((x.y + 1.0) / r)) * std::atan((r - 1.5) / eps);
  };
  // div beta = 0, so div sigma = beta . grad u = -gamma u along the streamlines.
  p.exact_div_sigma = [u = p.exact_u](const Vec2& x) { return -gamma * u(x); };
  if (eps < 1e-6) {
    p.discontinuity = Discontinuity{Discontinuity::Kind::circle, center, {}, 1.5};
    // r = 1.5 meets the west (inflow) side at (0, 0.5).
    p.g_jump_points = {Vec2{0.0, 0.5}};
  }
  // Extremes of u over the unit square: sample densely, including the edges.
  double lo = 0.0, hi = 0.0;
  constexpr int n = 400;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double v = p.exact_u({static_cast<double>(i) / n, static_cast<double>(j) / n});
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  p.exact_u_bounds = std::array<double, 2>{lo, hi};
  p.beta_sup = 1.0;
  p.gamma_sup = gamma;
  finish(p, unit_square_mesh());
  return p;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"pwc_aligned",     "smooth",     "peterson",
                                              "pws_aligned",     "pwc_nonmatching",
                                              "pws_nonmatching", "curved_01", "curved_m11",
                                              "layer_1e-2",      "layer_1e-10"};
  return names;
}

ProblemSpec make_problem(std::string_view name) {
  if (name == "pwc_aligned") return pwc_aligned();
  if (name == "smooth") return smooth();
  if (name == "peterson") return peterson();
  if (name == "pws_aligned") return pws_aligned();
  if (name == "pwc_nonmatching") return pwc_nonmatching();
  if (name == "pws_nonmatching") return pws_nonmatching();
  if (name == "curved_01") return curved(false);
  if (name == "curved_m11") return curved(true);
  if (name == "layer_1e-2") {
    auto p = make_layer_problem(1e-2);
    p.name = "layer_1e-2";
    return p;
  }
  if (name == "layer_1e-10") {
    auto p = make_layer_problem(1e-10);
    p.name = "layer_1e-10";
    return p;
  }
  throw ProblemError("unknown problem '" + std::string(name) + "'");
}

std::vector<ProblemSpec> catalog() {
  std::vector<ProblemSpec> out;
  for (const auto& n : catalog_names()) out.push_back(make_problem(n));
  return out;
}

Mesh unit_square_mesh() { return criss_cross_mesh(4); }

Mesh half_disk_mesh() {
  const double c = std::sqrt(0.5);
  const std::vector<Vec2> pts{{-1.0, 0.0}, {-0.5, 0.0}, {0.0, 0.0}, {0.5, 0.0},
                              {1.0, 0.0},  {c, c},      {0.0, 1.0}, {-c, c}};
  const std::vector<std::array<Index, 3>> tris{{3, 4, 5}, {2, 3, 5}, {2, 5, 6},
                                               {2, 6, 7}, {1, 2, 7}, {0, 1, 7}};
  GeometryDescriptor snap{[](const Vec2& p) {
    if (p.y <= 1e-12) return p;
    return p / norm(p);
  }};
  return build_mesh(pts, tris, snap);
}

Mesh rectangle_pi_mesh() {
  const std::vector<Vec2> pts{{0.0, 0.0}, {kPi / 3.0, 0.0}, {2.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}};
  const std::vector<std::array<Index, 3>> tris{{0, 1, 4}, {0, 4, 3}, {1, 2, 4}, {2, 5, 4}};
  return build_mesh(pts, tris);
}

Mesh peterson_mesh(int n) {
  if (n < 1) throw MeshError("peterson_mesh needs n >= 1");
  // Horizontal layers of height h = 1/n. Even rows carry nodes at x = i h,
  // odd rows at the staggered positions (i + 1/2) h plus the two corners.
  const double h = 1.0 / n;
  std::vector<Vec2> pts;
  std::vector<std::vector<Index>> rows(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double y = static_cast<double>(j) / n;
    auto& row = rows[static_cast<std::size_t>(j)];
    const auto add = [&](double x) {
      row.push_back(static_cast<Index>(pts.size()));
      pts.push_back({x, y});
    };
    if (j % 2 == 0) {
      for (int i = 0; i <= n; ++i) add(i * h);
    } else {
      add(0.0);
      for (int i = 0; i < n; ++i) add((i + 0.5) * h);
      add(1.0);
    }
  }
  std::vector<std::array<Index, 3>> tris;
  for (int j = 0; j < n; ++j) {
    const auto& lo = rows[static_cast<std::size_t>(j)];
    const auto& hi = rows[static_cast<std::size_t>(j) + 1];
    std::size_t a = 0, b = 0;
    // Advance along whichever row has the nearer next node.
    while (a + 1 < lo.size() || b + 1 < hi.size()) {
      const bool advance_lo =
          b + 1 >= hi.size() ||
          (a + 1 < lo.size() && pts[static_cast<std::size_t>(lo[a + 1])].x < pts[static_cast<std::size_t>(hi[b + 1])].x);
      if (advance_lo) {
        tris.push_back({lo[a], lo[a + 1], hi[b]});
        ++a;
      } else {
        tris.push_back({lo[a], hi[b + 1], hi[b]});
        ++b;
      }
    }
  }
  return build_mesh(pts, tris);
}

}  // namespace fluxls
