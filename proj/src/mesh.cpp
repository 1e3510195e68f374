#include "fluxls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace fluxls {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

Vec2 rotate_cw(const Vec2& v) { return {v.y, -v.x}; }

}  // namespace

std::string to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::interior: return "interior";
    case BoundaryClass::inflow: return "inflow";
    case BoundaryClass::outflow: return "outflow";
    case BoundaryClass::characteristic: return "characteristic";
  }
  return "unknown";
}

Vec2 Mesh::midpoint(Index e) const {
  const auto& ed = edge(e);
  return 0.5 * (vertex(ed.vertices[0]) + vertex(ed.vertices[1]));
}

Vec2 Mesh::centroid(Index t) const {
  const auto c = corners(t);
  return (c[0] + c[1] + c[2]) / 3.0;
}

std::array<Vec2, 3> Mesh::corners(Index t) const {
  const auto& tri = triangle(t);
  return {vertex(tri.vertices[0]), vertex(tri.vertices[1]), vertex(tri.vertices[2])};
}

double Mesh::total_area() const {
  double a = 0.0;
  for (const auto& t : triangles_) a += t.area;
  return a;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (const auto& t : triangles_) h = std::max(h, t.diameter);
  return h;
}

Mesh build_mesh(std::span<const Vec2> coords, std::span<const std::array<Index, 3>> triangles,
                std::optional<GeometryDescriptor> snapper) {
  Mesh mesh;
  mesh.vertices_.assign(coords.begin(), coords.end());
  mesh.snapper_ = std::move(snapper);
  const auto nv = static_cast<Index>(coords.size());
  for (const auto& p : coords) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex coordinate");
  }

  mesh.triangles_.reserve(triangles.size());
  std::unordered_map<std::uint64_t, Index> edge_of;
  edge_of.reserve(triangles.size() * 2);

  for (std::size_t t = 0; t < triangles.size(); ++t) {
    auto v = triangles[t];
    for (Index id : v) {
      if (id < 0 || id >= nv) {
        throw MeshError("triangle " + std::to_string(t) + " references invalid vertex " +
                        std::to_string(id));
      }
    }
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
      throw MeshError("triangle " + std::to_string(t) + " repeats a vertex");
    }
    const Vec2 a = coords[v[0]], b = coords[v[1]], c = coords[v[2]];
    double twice_area = cross(b - a, c - a);
    if (twice_area < 0) {
      std::swap(v[1], v[2]);
      twice_area = -twice_area;
    }
    const double diam = std::max({distance(a, b), distance(b, c), distance(a, c)});
    if (0.5 * twice_area <= 1e-14 * diam * diam) {
      throw MeshError("degenerate triangle " + std::to_string(t) + " (" + std::to_string(v[0]) +
                      ", " + std::to_string(v[1]) + ", " + std::to_string(v[2]) + ")");
    }

    Triangle tri;
    tri.vertices = v;
    tri.area = 0.5 * twice_area;
    tri.diameter = diam;
    const auto tid = static_cast<Index>(t);
    for (int i = 0; i < 3; ++i) {
      const Index p = v[(i + 1) % 3];
      const Index q = v[(i + 2) % 3];
      const auto key = edge_key(p, q);
      auto [it, inserted] = edge_of.try_emplace(key, static_cast<Index>(mesh.edges_.size()));
      if (inserted) {
        Edge e;
        e.vertices = {std::min(p, q), std::max(p, q)};
        e.triangles = {tid, -1};
        e.length = distance(coords[p], coords[q]);
        mesh.edges_.push_back(e);
      } else {
        auto& e = mesh.edges_[static_cast<std::size_t>(it->second)];
        if (e.triangles[1] >= 0) {
          throw MeshError("non-conforming input: edge (" + std::to_string(e.vertices[0]) + ", " +
                          std::to_string(e.vertices[1]) + ") shared by more than two triangles (" +
                          std::to_string(e.triangles[0]) + ", " + std::to_string(e.triangles[1]) +
                          ", " + std::to_string(t) + ")");
        }
        if (e.triangles[0] == tid) {
          throw MeshError("duplicate edge within triangle " + std::to_string(t));
        }
        e.triangles[1] = tid;
      }
      tri.edges[i] = it->second;
      tri.edge_orientation[i] = p < q ? 1 : -1;
    }
    mesh.triangles_.push_back(tri);
  }

  for (auto& e : mesh.edges_) {
    const Vec2 lo = coords[e.vertices[0]];
    const Vec2 hi = coords[e.vertices[1]];
    e.normal = rotate_cw(hi - lo) / e.length;
    if (e.on_boundary()) {
      // Outward: the triangle's opposite vertex lies on the other side.
      const auto& tri = mesh.triangles_[static_cast<std::size_t>(e.triangles[0])];
      Vec2 inside{};
      for (Index id : tri.vertices) {
        if (id != e.vertices[0] && id != e.vertices[1]) inside = coords[id];
      }
      if (dot(inside - lo, e.normal) > 0) e.normal = -e.normal;
    }
  }

  for (auto& tri : mesh.triangles_) {
    for (int i = 0; i < 3; ++i) {
      const auto& e = mesh.edges_[static_cast<std::size_t>(tri.edges[i])];
      const Vec2 p = coords[tri.vertices[(i + 1) % 3]];
      const Vec2 q = coords[tri.vertices[(i + 2) % 3]];
      const Vec2 outward = rotate_cw(q - p);
      tri.edge_signs[i] = dot(outward, e.normal) > 0 ? 1 : -1;
    }
  }

  // Duplicate triangles show up as an interior edge whose two triangles share
  // all three vertices.
  for (const auto& e : mesh.edges_) {
    if (e.on_boundary()) continue;
    auto a = mesh.triangles_[static_cast<std::size_t>(e.triangles[0])].vertices;
    auto b = mesh.triangles_[static_cast<std::size_t>(e.triangles[1])].vertices;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a == b) {
      throw MeshError("duplicate triangles " + std::to_string(e.triangles[0]) + " and " +
                      std::to_string(e.triangles[1]));
    }
  }

  mesh.parents_.resize(mesh.triangles_.size());
  for (std::size_t t = 0; t < mesh.parents_.size(); ++t) mesh.parents_[t] = static_cast<Index>(t);
  return mesh;
}

Mesh classify_boundary(Mesh mesh, const VectorField& beta) {
  for (auto& e : mesh.edges_) {
    if (!e.on_boundary()) {
      e.boundary_class = BoundaryClass::interior;
      continue;
    }
    const Vec2 mid = 0.5 * (mesh.vertices_[e.vertices[0]] + mesh.vertices_[e.vertices[1]]);
    const Vec2 b = beta(mid);
    const double bn = dot(b, e.normal);
    const double eps = 1e-12 * norm(b);
    if (bn < -eps) {
      e.boundary_class = BoundaryClass::inflow;
    } else if (bn > eps) {
      e.boundary_class = BoundaryClass::outflow;
    } else {
      e.boundary_class = BoundaryClass::characteristic;
    }
  }
  mesh.advection_ = beta;
  return mesh;
}

double min_angle(const Mesh& mesh) {
  double m = std::numbers::pi;
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto c = mesh.corners(t);
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = c[(i + 1) % 3] - c[i];
      const Vec2 v = c[(i + 2) % 3] - c[i];
      m = std::min(m, std::atan2(std::abs(cross(u, v)), dot(u, v)));
    }
  }
  return m;
}

std::string conformity_violation(const Mesh& mesh) {
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : mesh.triangles()) {
    for (int i = 0; i < 3; ++i) ++count[edge_key(t.vertices[(i + 1) % 3], t.vertices[(i + 2) % 3])];
  }
  for (const auto& e : mesh.edges()) {
    const int expected = e.on_boundary() ? 1 : 2;
    const auto it = count.find(edge_key(e.vertices[0], e.vertices[1]));
    const int got = it == count.end() ? 0 : it->second;
    if (got != expected) {
      std::ostringstream os;
      os << "edge (" << e.vertices[0] << ", " << e.vertices[1] << ") appears in " << got
         << " triangles, expected " << expected;
      return os.str();
    }
  }
  if (count.size() != mesh.edges().size()) return "triangle edge missing from the edge list";

  // A hanging vertex lies strictly inside an edge that the closure left
  // unsplit; such an edge shows up as a (spurious) boundary edge.
  const double cell = std::sqrt(mesh.total_area() / std::max<Index>(1, mesh.n_triangles()));
  const auto cell_of = [cell](double v) { return static_cast<long long>(std::floor(v / cell)); };
  std::unordered_map<std::uint64_t, std::vector<Index>> buckets;
  const auto bucket_key = [](long long i, long long j) {
    return (static_cast<std::uint64_t>(i) << 32) ^ static_cast<std::uint64_t>(j & 0xffffffff);
  };
  for (Index v = 0; v < mesh.n_vertices(); ++v) {
    const auto& p = mesh.vertex(v);
    buckets[bucket_key(cell_of(p.x), cell_of(p.y))].push_back(v);
  }
  for (const auto& e : mesh.edges()) {
    if (!e.on_boundary()) continue;
    const Vec2 a = mesh.vertex(e.vertices[0]);
    const Vec2 b = mesh.vertex(e.vertices[1]);
    for (long long i = cell_of(std::min(a.x, b.x)); i <= cell_of(std::max(a.x, b.x)); ++i) {
      for (long long j = cell_of(std::min(a.y, b.y)); j <= cell_of(std::max(a.y, b.y)); ++j) {
        const auto it = buckets.find(bucket_key(i, j));
        if (it == buckets.end()) continue;
        for (Index v : it->second) {
          if (v == e.vertices[0] || v == e.vertices[1]) continue;
          const Vec2 p = mesh.vertex(v);
          const double t = dot(p - a, b - a) / (e.length * e.length);
          if (t <= 0.0 || t >= 1.0) continue;
          if (std::abs(cross(b - a, p - a)) <= 1e-12 * e.length * e.length) {
            return "hanging vertex " + std::to_string(v) + " on edge (" +
                   std::to_string(e.vertices[0]) + ", " + std::to_string(e.vertices[1]) + ")";
          }
        }
      }
    }
  }
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    if (mesh.triangle(t).area <= 0) return "triangle " + std::to_string(t) + " has non-positive area";
  }
  return {};
}

Mesh criss_cross_mesh(int n, double x0, double x1, double y0, double y1) {
  if (n < 1) throw MeshError("criss_cross_mesh needs n >= 1");
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      pts.push_back({x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n});
    }
  }
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<Index, 3>> tris;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return build_mesh(pts, tris);
}

}  // namespace fluxls
