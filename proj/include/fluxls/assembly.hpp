#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxls/linalg.hpp"
#include "fluxls/mesh.hpp"
#include "fluxls/problem.hpp"
#include "fluxls/spaces.hpp"

namespace fluxls {

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MethodKind { LSFEM, LSFEM_B1, LSFEM_B2, C_LSFEM };

struct Method {
  MethodKind kind = MethodKind::LSFEM;
  double alpha_F = 10.0;  ///< LSFEM_B2 weight factor

  bool weak_inflow() const { return kind == MethodKind::LSFEM_B1 || kind == MethodKind::LSFEM_B2; }
  bool uses_flux() const { return kind != MethodKind::C_LSFEM; }
};

std::string to_string(MethodKind m);
/// Accepts lsfem, lsfem-b1, lsfem-b2, c-lsfem.
MethodKind parse_method(std::string_view name);

/// Fixed degrees of freedom: RT inflow edge moments of (beta.n) g for LSFEM,
/// inflow nodal values for C-LSFEM.
struct BoundaryData {
  std::vector<Index> dofs;
  std::vector<double> values;
};

/// Assembled least-squares system. Unknowns are ordered [flux, scalar]; for
/// C-LSFEM there is no flux block.
struct LinearSystem {
  Method method;
  int k = 0;
  DofMap flux;
  DofMap scalar;
  SparseSym matrix;
  std::vector<double> load;
  /// Functional value at zero: ||f||^2 plus the weighted boundary datum norm.
  double constant = 0.0;

  int n_flux() const { return method.uses_flux() ? flux.n_global : 0; }
  int size() const { return n_flux() + scalar.n_global; }
};

/// Quadrature degrees used throughout assembly and estimation.
inline int triangle_degree(int k) { return 2 * k + 4; }
inline int edge_degree(int k) { return 2 * k + 5; }

LinearSystem assemble(const Mesh& mesh, const Method& method, int k, const ProblemSpec& problem);

/// Per-edge L2 projection of (beta.n) g onto P_k(F), as RT edge dof values.
/// Rejects g jump points inside an inflow edge.
BoundaryData project_inflow_g(const Mesh& mesh, const ProblemSpec& problem, int k);

/// Nodal inflow values for C-LSFEM, averaging one-sided limits at jump points.
BoundaryData assemble_clsfem_bc(const Mesh& mesh, const ProblemSpec& problem);

/// System restricted to the free unknowns after symmetric elimination.
struct ReducedSystem {
  SparseSym matrix;
  std::vector<double> load;
  std::vector<Index> free_dofs;
  /// Full-length vector holding the constrained values (zero elsewhere).
  std::vector<double> lifting;

  std::vector<double> expand(std::span<const double> reduced) const;
};

ReducedSystem apply_strong_bc(const SparseSym& a, std::span<const double> b, const BoundaryData& bc);

enum class SolverKind { cholesky, cg, dense };

struct SolverOptions {
  SolverKind kind = SolverKind::cholesky;
  double tol = 1e-10;
  int maxit = 0;  ///< cg only; 0 means 10 n
  Preconditioner precond = Preconditioner::jacobi;
};

struct DiscreteSolution {
  Method method;
  int k = 0;
  DofMap flux;
  DofMap scalar;
  std::vector<double> sigma;
  std::vector<double> u;
  SolveReport report;

  /// Full coefficient vector in system order.
  std::vector<double> stacked() const;
};

/// Split a system-ordered vector into a solution.
DiscreteSolution make_solution(const LinearSystem& sys, std::span<const double> x);

/// Assemble, apply boundary conditions and solve.
DiscreteSolution solve(const Mesh& mesh, const Method& method, int k, const ProblemSpec& problem,
                       const SolverOptions& options = {});

/// Squared residual parts of a discrete solution on one element. For the
/// flux methods: constitutive = ||sigma - beta u||^2, balance =
/// ||div sigma + gamma u - f||^2, boundary = weighted inflow mismatch (weak
/// methods only). For C-LSFEM balance = ||beta.grad u + mu u - f||^2.
struct ElementTerms {
  double constitutive = 0.0;
  double balance = 0.0;
  double boundary = 0.0;

  double total() const { return constitutive + balance + boundary; }
};

/// degree <= 0 selects triangle_degree(k).
std::vector<ElementTerms> element_residuals(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem,
                                            int degree = 0);

/// Least-squares functional of the discrete solution, by quadrature.
double ls_functional(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem);

/// Functional evaluated algebraically: x^T A x - 2 b^T x + constant.
double ls_functional_algebraic(const LinearSystem& sys, std::span<const double> x);

/// Reaction coefficient mu = gamma + div beta, by central differences when
/// div beta is not given.
double reaction_mu(const ProblemSpec& problem, const Vec2& x, double h);

/// Weight omega / |beta.n| on an inflow edge point; throws AssemblyError when
/// |beta.n| degenerates.
double inflow_weight(const Method& method, double h_F, double beta_n);

/// Element-averaged flux vectors (sigma_h for flux methods, beta u_h otherwise).
std::vector<Vec2> cell_average_flux(const Mesh& mesh, const DiscreteSolution& sol, const ProblemSpec& problem);
/// Element-averaged scalar values.
std::vector<double> cell_average_u(const Mesh& mesh, const DiscreteSolution& sol);

}  // namespace fluxls
