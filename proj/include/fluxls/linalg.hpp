#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fluxls {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Symmetric sparse matrix in compressed-row form, storing both triangles.
class SparseSym {
 public:
  SparseSym() = default;
  /// Duplicates are summed; entries are kept in column order within a row.
  static SparseSym from_triplets(int n, std::vector<Triplet> entries);

  int n() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  double at(int i, int j) const;
  std::vector<double> diagonal() const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  /// max |A_ij - A_ji| over the stored pattern (missing partners count as 0).
  double asymmetry() const;
  /// diag(s) A diag(s); symmetry is preserved exactly.
  SparseSym scaled(std::span<const double> s) const;

 private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

enum class Preconditioner { none, jacobi };

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// Preconditioned conjugate gradients. maxit <= 0 means 10 n.
SolveResult cg_solve(const SparseSym& a, std::span<const double> b, double tol = 1e-10, int maxit = 0,
                     Preconditioner precond = Preconditioner::jacobi);

/// Sparse Cholesky factorization (AMD ordering) followed by iterative
/// refinement until the relative residual is at most tol. Iterations counts
/// the refinement steps.
SolveResult cholesky_solve(const SparseSym& a, std::span<const double> b, double tol = 1e-10);

inline constexpr int kDenseFallbackLimit = 2000;

/// Dense Cholesky solve, for n <= kDenseFallbackLimit. Throws
/// std::invalid_argument above the limit, std::runtime_error if not SPD.
std::vector<double> dense_solve(const SparseSym& a, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace fluxls
