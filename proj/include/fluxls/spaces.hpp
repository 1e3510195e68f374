#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxls/geometry.hpp"
#include "fluxls/mesh.hpp"

namespace fluxls {

enum class SpaceKind { RT0, RT1, P0, P1dg, P1c };

std::string to_string(SpaceKind s);
bool is_flux_space(SpaceKind s);
int polynomial_order(SpaceKind s);
/// Number of basis functions per element.
int local_dimension(SpaceKind s);

/// Flux space paired with scalar space of the same order.
SpaceKind flux_space(int k);
SpaceKind scalar_space(int k);

/// Basis values at a set of points, laid out point-major: entry
/// [q * n_basis + i] belongs to point q and basis function i.
struct BasisEval {
  SpaceKind space = SpaceKind::P0;
  std::size_t n_points = 0;
  std::size_t n_basis = 0;
  std::vector<Vec2> vectors;        ///< RT values
  std::vector<double> divergences;  ///< RT divergences
  std::vector<double> scalars;      ///< P values
  std::vector<Vec2> gradients;      ///< P gradients

  const Vec2& vector(std::size_t q, std::size_t i) const { return vectors[q * n_basis + i]; }
  double divergence(std::size_t q, std::size_t i) const { return divergences[q * n_basis + i]; }
  double scalar(std::size_t q, std::size_t i) const { return scalars[q * n_basis + i]; }
  const Vec2& gradient(std::size_t q, std::size_t i) const { return gradients[q * n_basis + i]; }
};

/// Reference triangle (0,0),(1,0),(0,1); local edge i is opposite vertex i and
/// runs vertex i+1 -> vertex i+2. RT edge degrees of freedom are normal-flux
/// moments against 1 and (2t - 1), t the edge parameter along that direction;
/// RT1 adds the two interior moments against constant unit vectors.
BasisEval reference_basis(SpaceKind space, std::span<const Vec2> points);

/// Affine element map x = p0 + J xhat together with the orientation data the
/// Piola transform needs.
struct ElementGeometry {
  std::array<Vec2, 3> corners;
  std::array<double, 4> jacobian{};  ///< row-major 2x2
  double det = 0.0;
  std::array<int, 3> edge_signs{1, 1, 1};
  std::array<int, 3> edge_orientation{1, 1, 1};

  static ElementGeometry of(const Mesh& mesh, Index tri);
  static ElementGeometry reference();

  Vec2 map(const Vec2& ref) const;
  Vec2 apply_jacobian(const Vec2& v) const;
  /// J^{-T} v
  Vec2 apply_inverse_transpose(const Vec2& v) const;
  double area() const { return 0.5 * det; }
};

/// Per-function sign relating local to global orientation.
std::array<int, 8> local_signs(SpaceKind space, const ElementGeometry& geo);

/// Contravariant Piola transform for RT spaces (values (1/det J) J v, divergence
/// div / det J, times the global orientation sign); scalar spaces keep values
/// and map gradients by J^{-T}. Throws std::domain_error for a singular map.
BasisEval piola_map(const ElementGeometry& geo, const BasisEval& ref);

/// Global numbering of one finite element space on a mesh.
struct DofMap {
  SpaceKind space = SpaceKind::P0;
  Index n_global = 0;
  int local_size = 0;
  std::vector<Index> cell_dofs;
  std::vector<int> cell_signs;
  /// Flux spaces: edge dofs on inflow edges.
  std::vector<Index> inflow_dofs;

  std::span<const Index> dofs(Index tri) const {
    return {cell_dofs.data() + static_cast<std::size_t>(tri) * local_size, static_cast<std::size_t>(local_size)};
  }
  std::span<const int> signs(Index tri) const {
    return {cell_signs.data() + static_cast<std::size_t>(tri) * local_size, static_cast<std::size_t>(local_size)};
  }
};

DofMap make_dofmap(const Mesh& mesh, SpaceKind space);

/// Edge degrees of freedom of an RT_k field on one edge: moments of tau . n_F
/// against q_j(s), s running from the lower to the higher vertex id.
std::array<double, 2> edge_moments(const Mesh& mesh, Index edge, const ScalarField& normal_flux, int k);

/// Canonical RT interpolant (global coefficients of RT_k).
std::vector<double> interpolate_rt(const Mesh& mesh, const VectorField& field, int k);

/// Element-wise L2 projection onto P_k (P0 or barycentric P1dg coefficients).
std::vector<double> project_l2(const Mesh& mesh, const ScalarField& field, int k);

/// Nodal interpolation into P1c.
std::vector<double> interpolate_p1c(const Mesh& mesh, const ScalarField& field);

/// Evaluate a finite element function at reference points of one element.
struct LocalField {
  std::vector<Vec2> vectors;
  std::vector<double> divergences;
  std::vector<double> scalars;
  std::vector<Vec2> gradients;
};
LocalField evaluate_local(const DofMap& dofs, std::span<const double> coeffs, Index tri,
                          const BasisEval& physical);

}  // namespace fluxls
