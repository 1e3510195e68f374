#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxls/geometry.hpp"

namespace fluxls {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryClass { interior, inflow, outflow, characteristic };

std::string to_string(BoundaryClass c);

struct Edge {
  /// Global orientation: vertices[0] < vertices[1].
  std::array<Index, 2> vertices{};
  /// triangles[1] == -1 on the boundary.
  std::array<Index, 2> triangles{-1, -1};
  double length = 0.0;
  /// Outward for boundary edges; rotate_cw(v1 - v0) / length for interior edges.
  Vec2 normal;
  BoundaryClass boundary_class = BoundaryClass::interior;

  bool on_boundary() const { return triangles[1] < 0; }
};

struct Triangle {
  /// Counterclockwise.
  std::array<Index, 3> vertices{};
  /// edges[i] is opposite vertices[i], i.e. runs vertices[i+1] -> vertices[i+2].
  std::array<Index, 3> edges{};
  /// +1 where the local outward normal equals Edge::normal, -1 otherwise.
  std::array<int, 3> edge_signs{};
  /// +1 where the local traversal vertices[i+1] -> vertices[i+2] runs from the
  /// lower to the higher global vertex id.
  std::array<int, 3> edge_orientation{};
  double area = 0.0;
  double diameter = 0.0;
};

/// Maps a point on a polygonal approximation of a curved boundary onto the
/// true boundary curve. Applied to new boundary vertices created by bisection.
struct GeometryDescriptor {
  std::function<Vec2(const Vec2&)> snap;
};

/// Conforming triangulation with edge adjacency. Immutable once built;
/// refinement returns a new mesh.
class Mesh {
 public:
  Mesh() = default;

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Triangle> triangles() const { return triangles_; }

  const Vec2& vertex(Index i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const Edge& edge(Index i) const { return edges_[static_cast<std::size_t>(i)]; }
  const Triangle& triangle(Index i) const { return triangles_[static_cast<std::size_t>(i)]; }

  Index n_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index n_edges() const { return static_cast<Index>(edges_.size()); }
  Index n_triangles() const { return static_cast<Index>(triangles_.size()); }

  /// Number of refinement calls this mesh descends from.
  int generation() const { return generation_; }
  /// For each triangle, the id of the triangle in the previous generation it
  /// was cut from (its own id in generation 0).
  std::span<const Index> parents() const { return parents_; }

  const std::optional<GeometryDescriptor>& snapper() const { return snapper_; }

  bool classified() const { return static_cast<bool>(advection_); }
  /// Advection field the boundary was last classified with.
  const VectorField& advection() const { return advection_; }

  Vec2 midpoint(Index edge) const;
  Vec2 centroid(Index tri) const;
  std::array<Vec2, 3> corners(Index tri) const;
  double total_area() const;
  double max_diameter() const;

 private:
  friend Mesh build_mesh(std::span<const Vec2>, std::span<const std::array<Index, 3>>,
                         std::optional<GeometryDescriptor>);
  friend Mesh classify_boundary(Mesh, const VectorField&);
  friend Mesh refine(const Mesh&, std::span<const Index>, std::size_t);

  std::vector<Vec2> vertices_;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
  std::vector<Index> parents_;
  int generation_ = 0;
  std::optional<GeometryDescriptor> snapper_;
  VectorField advection_;
};

/// Builds edges, adjacency and element geometry. Clockwise triangles are
/// reordered. Throws MeshError on degenerate or non-conforming input.
Mesh build_mesh(std::span<const Vec2> coords, std::span<const std::array<Index, 3>> triangles,
                std::optional<GeometryDescriptor> snapper = std::nullopt);

/// Labels boundary edges by the sign of beta . n at the edge midpoint.
Mesh classify_boundary(Mesh mesh, const VectorField& beta);

inline constexpr std::size_t kDefaultVertexCap = 5'000'000;

/// Longest-edge bisection of the marked triangles with conforming closure
/// (Rivara's LEPP algorithm). New boundary vertices are snapped when the
/// mesh carries a GeometryDescriptor; boundary labels are recomputed with the
/// stored advection field.
Mesh refine(const Mesh& mesh, std::span<const Index> marked,
            std::size_t vertex_cap = kDefaultVertexCap);

Mesh uniform_refine(const Mesh& mesh, std::size_t vertex_cap = kDefaultVertexCap);

// Mesh quality and structure checks.

/// Smallest interior angle over all triangles, radians.
double min_angle(const Mesh& mesh);
/// Empty when conforming; otherwise a description of the first violation.
std::string conformity_violation(const Mesh& mesh);

// Structured generators.

/// N x N squares of [x0,x1]x[y0,y1], each split by its diagonal parallel to (1,1).
Mesh criss_cross_mesh(int n, double x0 = 0.0, double x1 = 1.0, double y0 = 0.0, double y1 = 1.0);

// Plain-text format: "VERTICES n" / "TRIANGLES m" header lines, then n lines
// "x y", then m lines "i j k" (0-based).
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace fluxls
