#include "fluxls/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace fluxls {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] -> [0,1], ascending order.
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    rule.points[idx] = {0.5 * (x + 1.0), 0.0};
    rule.weights[idx] = 0.5 * w;
  }
  return rule;
}

QuadratureRule collapsed_triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("negative quadrature degree");
  // The collapse (u, v) -> (u, v (1 - u)) multiplies the integrand by (1 - u),
  // raising the degree in u by one.
  const int n = std::max(1, (degree + 2 + 1) / 2);
  const QuadratureRule g = gauss_legendre(n);
  QuadratureRule rule;
  rule.degree = degree;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = g.points[i].x;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double v = g.points[j].x;
      rule.points.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

const QuadratureRule& quadrature(QuadDomain domain, int degree) {
  static const auto tri_rules = [] {
    std::array<QuadratureRule, kMaxTriangleDegree + 1> r;
    for (int d = 0; d <= kMaxTriangleDegree; ++d) r[static_cast<std::size_t>(d)] = collapsed_triangle_rule(d);
    return r;
  }();
  static const auto seg_rules = [] {
    std::array<QuadratureRule, kMaxSegmentDegree + 1> r;
    for (int d = 0; d <= kMaxSegmentDegree; ++d) {
      r[static_cast<std::size_t>(d)] = gauss_legendre(d / 2 + 1);
      r[static_cast<std::size_t>(d)].degree = d;
    }
    return r;
  }();

  if (domain == QuadDomain::triangle) {
    if (degree < 0 || degree > kMaxTriangleDegree) {
      throw std::invalid_argument("unsupported triangle quadrature degree " + std::to_string(degree));
    }
    return tri_rules[static_cast<std::size_t>(degree)];
  }
  if (degree < 0 || degree > kMaxSegmentDegree) {
    throw std::invalid_argument("unsupported segment quadrature degree " + std::to_string(degree));
  }
  return seg_rules[static_cast<std::size_t>(degree)];
}

}  // namespace fluxls
