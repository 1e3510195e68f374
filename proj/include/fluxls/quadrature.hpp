#pragma once

#include <stdexcept>
#include <vector>

#include "fluxls/geometry.hpp"

namespace fluxls {

enum class QuadDomain { triangle, segment };

/// Points are reference coordinates: the triangle (0,0),(1,0),(0,1) or the
/// segment [0,1] (stored in x, y = 0). Weights sum to the reference measure.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxTriangleDegree = 8;
inline constexpr int kMaxSegmentDegree = 15;

/// Rule exact for polynomials of total degree <= degree. Triangle rules are
/// collapsed (Duffy) Gauss products; segment rules are Gauss-Legendre.
/// Throws std::invalid_argument outside the supported range.
const QuadratureRule& quadrature(QuadDomain domain, int degree);

/// n-point Gauss-Legendre rule on [0,1] (exact to degree 2n-1).
QuadratureRule gauss_legendre(int n);

/// Collapsed Gauss rule on the reference triangle exact to the given degree,
/// without the range limit of quadrature().
QuadratureRule collapsed_triangle_rule(int degree);

}  // namespace fluxls
