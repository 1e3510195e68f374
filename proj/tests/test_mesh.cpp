#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "fluxls/mesh.hpp"
#include "fluxls/problem.hpp"

using namespace fluxls;

namespace {

Mesh two_triangle_square() {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<std::array<Index, 3>> tris{{0, 1, 2}, {0, 2, 3}};
  return build_mesh(pts, tris);
}

// Independent conformity oracle: every vertex pair of a triangle side is
// shared by at most two triangles, and by exactly one on the boundary of the
// square. No vertex lies strictly inside another triangle's side.
bool hanging_node_free(const Mesh& mesh) {
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto c = mesh.corners(t);
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = c[static_cast<std::size_t>((i + 1) % 3)], b = c[static_cast<std::size_t>((i + 2) % 3)];
      for (const Vec2& v : mesh.vertices()) {
        const Vec2 d = b - a, w = v - a;
        const double s = dot(w, d) / dot(d, d);
        if (s <= 1e-9 || s >= 1 - 1e-9) continue;
        if (std::abs(cross(d, w)) < 1e-12 * dot(d, d)) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST(BuildMesh, TwoTriangleSquareCounts) {
  const Mesh m = two_triangle_square();
  EXPECT_EQ(m.n_vertices(), 4);
  EXPECT_EQ(m.n_edges(), 5);
  EXPECT_EQ(m.n_triangles(), 2);
  int interior = 0;
  for (const auto& e : m.edges()) interior += e.on_boundary() ? 0 : 1;
  EXPECT_EQ(interior, 1);
}

TEST(BuildMesh, ReferenceTriangleGeometry) {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<std::array<Index, 3>> tris{{0, 1, 2}};
  const Mesh m = build_mesh(pts, tris);
  EXPECT_DOUBLE_EQ(m.triangle(0).area, 0.5);
  EXPECT_DOUBLE_EQ(m.triangle(0).diameter, std::sqrt(2.0));
}

TEST(BuildMesh, CrissCrossTwoByTwoEuler) {
  const Mesh m = criss_cross_mesh(2);
  EXPECT_EQ(m.n_vertices(), 9);
  EXPECT_EQ(m.n_edges(), 16);
  EXPECT_EQ(m.n_triangles(), 8);
  EXPECT_EQ(m.n_vertices() - m.n_edges() + m.n_triangles(), 1);
}

TEST(BuildMesh, ClockwiseInputIsReordered) {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<std::array<Index, 3>> tris{{0, 2, 1}};
  const Mesh m = build_mesh(pts, tris);
  const auto c = m.corners(0);
  EXPECT_GT(cross(c[1] - c[0], c[2] - c[0]), 0.0);
}

TEST(BuildMesh, RejectsDegenerateAndNonConforming) {
  const std::vector<Vec2> line{{0, 0}, {1, 0}, {2, 0}};
  const std::vector<std::array<Index, 3>> flat{{0, 1, 2}};
  EXPECT_THROW(build_mesh(line, flat), MeshError);

  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const std::vector<std::array<Index, 3>> tris{{0, 1, 2}, {0, 1, 2}, {0, 1, 3}};
  EXPECT_THROW(build_mesh(pts, tris), MeshError);
}

TEST(BuildMesh, EdgeOrientationLowerIdFirst) {
  const Mesh m = criss_cross_mesh(3);
  for (const auto& e : m.edges()) EXPECT_LT(e.vertices[0], e.vertices[1]);
}

TEST(ClassifyBoundary, DiagonalFlowOnSquare) {
  const Mesh m = classify_boundary(criss_cross_mesh(4), [](const Vec2&) { return Vec2{1, 1} / std::sqrt(2.0); });
  for (const auto& e : m.edges()) {
    if (!e.on_boundary()) {
      EXPECT_EQ(e.boundary_class, BoundaryClass::interior);
      continue;
    }
    const Vec2 mid = 0.5 * (m.vertex(e.vertices[0]) + m.vertex(e.vertices[1]));
    const bool west_or_south = mid.x < 1e-12 || mid.y < 1e-12;
    EXPECT_EQ(e.boundary_class, west_or_south ? BoundaryClass::inflow : BoundaryClass::outflow);
  }
}

TEST(ClassifyBoundary, HalfDiskRotation) {
  const auto p = make_problem("curved_01");
  for (const auto& e : p.initial_mesh.edges()) {
    if (e.boundary_class != BoundaryClass::inflow) continue;
    const Vec2 a = p.initial_mesh.vertex(e.vertices[0]), b = p.initial_mesh.vertex(e.vertices[1]);
    EXPECT_NEAR(a.y, 0.0, 1e-14);
    EXPECT_NEAR(b.y, 0.0, 1e-14);
    EXPECT_LE(std::max(a.x, b.x), 1e-14);
  }
}

TEST(ClassifyBoundary, LayerDomainWestAndNorth) {
  const auto p = make_problem("layer_1e-2");
  for (const auto& e : p.initial_mesh.edges()) {
    if (!e.on_boundary()) continue;
    const Vec2 mid = p.initial_mesh.midpoint(static_cast<Index>(&e - p.initial_mesh.edges().data()));
    const bool west_or_north = mid.x < 1e-12 || mid.y > 1 - 1e-12;
    EXPECT_EQ(e.boundary_class == BoundaryClass::inflow, west_or_north);
  }
}

TEST(Refine, MarkBothBisectsSharedDiagonal) {
  const Mesh m = two_triangle_square();
  const std::vector<Index> all{0, 1};
  const Mesh r = refine(m, all);
  EXPECT_EQ(r.n_vertices(), 5);
  EXPECT_EQ(r.n_edges(), 8);
  EXPECT_EQ(r.n_triangles(), 4);
  EXPECT_DOUBLE_EQ(r.vertex(4).x, 0.5);
  EXPECT_DOUBLE_EQ(r.vertex(4).y, 0.5);
}

TEST(Refine, ClosureSplitsNeighbour) {
  const Mesh m = two_triangle_square();
  const std::vector<Index> one{0};
  const Mesh r = refine(m, one);
  EXPECT_EQ(r.n_triangles(), 4);
  EXPECT_TRUE(conformity_violation(r).empty());
}

TEST(Refine, HalfDiskSnapsToArc) {
  Mesh m = make_problem("curved_01").initial_mesh;
  for (int i = 0; i < 4; ++i) m = uniform_refine(m);
  for (const auto& e : m.edges()) {
    if (!e.on_boundary()) continue;
    for (Index v : e.vertices) {
      const Vec2 x = m.vertex(v);
      if (x.y > 1e-12) EXPECT_NEAR(norm(x), 1.0, 1e-12);
    }
  }
}

TEST(Refine, ParentsPointIntoPreviousGeneration) {
  const Mesh m = criss_cross_mesh(2);
  const std::vector<Index> marked{3};
  const Mesh r = refine(m, marked);
  EXPECT_EQ(r.generation(), 1);
  ASSERT_EQ(r.parents().size(), static_cast<std::size_t>(r.n_triangles()));
  std::map<Index, double> area;
  for (Index t = 0; t < r.n_triangles(); ++t) area[r.parents()[static_cast<std::size_t>(t)]] += r.triangle(t).area;
  for (const auto& [parent, a] : area) EXPECT_NEAR(a, m.triangle(parent).area, 1e-15);
}

TEST(UniformRefine, TriangleCounts) {
  const Mesh m = two_triangle_square();
  const Mesh once = uniform_refine(m);
  EXPECT_EQ(once.n_triangles(), 4);
  // Second sweep: each of the 4 right triangles bisects its hypotenuse, and
  // the closure over shared hypotenuses leaves 8 triangles.
  const Mesh twice = uniform_refine(once);
  EXPECT_EQ(twice.n_triangles(), 8);
  EXPECT_EQ(uniform_refine(twice).n_triangles(), 16);
}

TEST(UniformRefine, AnglesStayBounded) {
  Mesh m = make_problem("pwc_nonmatching").initial_mesh;
  const double initial = min_angle(m);
  for (int i = 0; i < 8; ++i) {
    m = uniform_refine(m);
    EXPECT_GE(min_angle(m), 0.5 * initial);
  }
}

TEST(Refine, RandomRoundsStayConformingAndShapeRegular) {
  std::mt19937 rng(11);
  for (const char* name : {"smooth", "pwc_nonmatching", "curved_01", "peterson"}) {
    Mesh m = make_problem(name).initial_mesh;
    const double initial = min_angle(m);
    const double area0 = m.total_area();
    for (int round = 0; round < 10; ++round) {
      std::vector<Index> marked;
      std::bernoulli_distribution pick(0.2);
      for (Index t = 0; t < m.n_triangles(); ++t) {
        if (pick(rng)) marked.push_back(t);
      }
      const double before = m.total_area();
      m = refine(m, marked);
      ASSERT_TRUE(conformity_violation(m).empty()) << name << ": " << conformity_violation(m);
      ASSERT_TRUE(hanging_node_free(m)) << name;
      EXPECT_GE(min_angle(m), 0.5 * initial) << name;
      if (std::string(name) == "curved_01") {
        EXPECT_GE(m.total_area(), before - 1e-14);
        EXPECT_LE(m.total_area(), std::numbers::pi / 2);
      } else {
        EXPECT_NEAR(m.total_area(), area0, 1e-10 * area0) << name;
      }
    }
  }
}

TEST(Refine, ClassificationInvariantForConstantBeta) {
  const auto p = make_problem("pwc_aligned");
  Mesh m = p.initial_mesh;
  for (int i = 0; i < 3; ++i) {
    const std::vector<Index> marked{0, m.n_triangles() - 1};
    m = refine(m, marked);
  }
  const Mesh fresh = classify_boundary(m, p.beta);
  for (Index e = 0; e < m.n_edges(); ++e) EXPECT_EQ(m.edge(e).boundary_class, fresh.edge(e).boundary_class);
}

TEST(MeshIo, RoundTrip) {
  const Mesh m = uniform_refine(make_problem("pwc_nonmatching").initial_mesh);
  std::stringstream buf;
  write_mesh(buf, m);
  const std::string text = buf.str();
  EXPECT_EQ(text.rfind("VERTICES ", 0), 0u);
  const Mesh back = read_mesh(buf);
  ASSERT_EQ(back.n_vertices(), m.n_vertices());
  ASSERT_EQ(back.n_triangles(), m.n_triangles());
  for (Index v = 0; v < m.n_vertices(); ++v) {
    EXPECT_EQ(back.vertex(v).x, m.vertex(v).x);
    EXPECT_EQ(back.vertex(v).y, m.vertex(v).y);
  }
}

TEST(MeshIo, MalformedInputThrows) {
  std::stringstream bad("VERTICES 3\nTRIANGLES 1\n0 0\n1 0\n");
  EXPECT_THROW(read_mesh(bad), MeshError);
}
