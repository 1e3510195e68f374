#pragma once

#include <optional>
#include <vector>

#include "fluxls/assembly.hpp"
#include "fluxls/problem.hpp"

namespace fluxls {

/// Quadrature point on a physical element: reference coordinates, physical
/// coordinates, and physical weight.
struct ElementPoint {
  Vec2 ref;
  Vec2 x;
  double weight;
};

/// True when the discontinuity passes through the interior of the triangle.
bool is_cut(const std::array<Vec2, 3>& corners, const Discontinuity& d);

/// Degree-exact rule on one element. Elements cut by the discontinuity are
/// integrated piecewise over the polygons on either side; circles are
/// approximated by 8 chords across the element's angular extent.
std::vector<ElementPoint> element_quadrature(const Mesh& mesh, Index tri, int degree,
                                             const std::optional<Discontinuity>& disc);

struct ErrorReport {
  double l2_u = 0.0;
  double l2_sigma = 0.0;
  double hdiv_sigma = 0.0;
  /// Least-squares norm of the error, including the weighted inflow term for
  /// the weak inflow methods. For C-LSFEM, the residual norm.
  double ls_norm = 0.0;
};

/// Squared per-element error contributions.
struct ElementErrors {
  double l2_u = 0.0;
  double l2_sigma = 0.0;
  double div_sigma = 0.0;
  double ls = 0.0;
};

std::vector<ElementErrors> exact_error_elements(const Mesh& mesh, const DiscreteSolution& sol,
                                                const ProblemSpec& problem, int degree = 8);

/// Throws ProblemError when the problem has no exact solution.
ErrorReport exact_errors(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem, int degree = 8);

}  // namespace fluxls
