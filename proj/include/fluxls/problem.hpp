#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fluxls/geometry.hpp"
#include "fluxls/mesh.hpp"

namespace fluxls {

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Known curve across which the exact solution jumps; used for split
/// quadrature of error norms.
struct Discontinuity {
  enum class Kind { line, circle };
  Kind kind = Kind::line;
  Vec2 point;       ///< line: a point on it; circle: the center
  Vec2 direction;   ///< line only
  double radius = 0.0;

  /// Signed level set: positive on the left of the line / outside the circle.
  double level(const Vec2& p) const;
};

/// Transport problem  div(beta u) + gamma u = f in the domain, u = g on the
/// inflow boundary, with optional exact solution.
struct ProblemSpec {
  std::string name;
  VectorField beta;
  ScalarField div_beta;  ///< empty when not known in closed form
  ScalarField gamma;
  ScalarField f;
  ScalarField g;
  /// Boundary points where g has a jump (one-sided limits differ).
  std::vector<Vec2> g_jump_points;

  ScalarField exact_u;
  VectorField exact_sigma;
  ScalarField exact_div_sigma;
  std::optional<std::array<double, 2>> exact_u_bounds;
  std::optional<Discontinuity> discontinuity;

  /// sup |beta| and sup |gamma| over the domain.
  double beta_sup = 1.0;
  double gamma_sup = 0.0;

  Mesh initial_mesh;  ///< classified with beta
  /// Optional family of unrelated structured meshes indexed by level, used
  /// in place of uniform refinement.
  std::function<Mesh(int)> mesh_family;

  bool has_exact() const { return static_cast<bool>(exact_u); }
};

/// Names accepted by make_problem, in catalog order.
const std::vector<std::string>& catalog_names();
ProblemSpec make_problem(std::string_view name);
std::vector<ProblemSpec> catalog();

/// Transient layer problem with layer width eps.
ProblemSpec make_layer_problem(double eps);

// Initial meshes.
Mesh unit_square_mesh();
Mesh half_disk_mesh();
Mesh rectangle_pi_mesh();
/// Peterson-type layered mesh of the unit square with h = 1/n: rows of
/// height h whose nodes are staggered by h/2 on alternate rows.
Mesh peterson_mesh(int n);

}  // namespace fluxls
