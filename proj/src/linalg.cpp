#include "fluxls/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluxls {

SparseSym SparseSym::from_triplets(int n, std::vector<Triplet> entries) {
  SparseSym m;
  m.n_ = n;
  std::stable_sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  int last_row = -1, last_col = -1;
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) throw std::out_of_range("triplet index out of range");
    if (t.row == last_row && t.col == last_col) {
      m.values_.back() += t.value;
      continue;
    }
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_ptr_[static_cast<std::size_t>(t.row) + 1];
    last_row = t.row;
    last_col = t.col;
  }
  for (std::size_t i = 1; i < m.row_ptr_.size(); ++i) m.row_ptr_[i] += m.row_ptr_[i - 1];
  return m;
}

double SparseSym::at(int i, int j) const {
  const auto begin = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
  const auto end = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<double> SparseSym::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) d[static_cast<std::size_t>(i)] = at(i, i);
  return d;
}

void SparseSym::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      s += values_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
}

std::vector<double> SparseSym::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(n_));
  multiply(x, y);
  return y;
}

SparseSym SparseSym::scaled(std::span<const double> s) const {
  if (s.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("scaled: size mismatch");
  SparseSym out = *this;
  for (int i = 0; i < n_; ++i) {
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const auto j = static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)]);
      out.values_[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(i)] * values_[static_cast<std::size_t>(k)] * s[j];
    }
  }
  return out;
}

double SparseSym::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int k = row_ptr_[static_cast<std::size_t>(i)]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) {
      const int j = col_idx_[static_cast<std::size_t>(k)];
      worst = std::max(worst, std::abs(values_[static_cast<std::size_t>(k)] - at(j, i)));
    }
  }
  return worst;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SolveResult cg_solve(const SparseSym& a, std::span<const double> b, double tol, int maxit, Preconditioner precond) {
  const auto n = static_cast<std::size_t>(a.n());
  if (b.size() != n) throw std::invalid_argument("cg_solve: size mismatch");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("cg_solve: tol must lie in (0,1)");
  if (maxit <= 0) maxit = 10 * std::max(a.n(), 1);

  SolveResult out;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.report.converged = true;
    return out;
  }

  std::vector<double> inv_diag(n, 1.0);
  if (precond == Preconditioner::jacobi) {
    const auto d = a.diagonal();
    for (std::size_t i = 0; i < n; ++i) inv_diag[i] = d[i] > 0.0 ? 1.0 / d[i] : 1.0;
  }

  std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double res = 1.0;
  int it = 0;
  while (it < maxit) {
    a.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    ++it;
    res = norm2(r) / bnorm;
    if (res <= tol) break;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  // Report the true residual, not the recursively updated one.
  const auto ax = a.multiply(out.x);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (b[i] - ax[i]) * (b[i] - ax[i]);
  out.report.iterations = it;
  out.report.relative_residual = std::sqrt(s) / bnorm;
  out.report.converged = out.report.relative_residual <= tol;
  return out;
}

SolveResult cholesky_solve(const SparseSym& a, std::span<const double> b, double tol) {
  const auto n = static_cast<std::size_t>(a.n());
  if (b.size() != n) throw std::invalid_argument("cholesky_solve: size mismatch");
  SolveResult out;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.report.converged = true;
    return out;
  }
  // Factor the symmetrically Jacobi-scaled matrix S A S; the diagonal of the
  // least-squares systems spans many orders of magnitude on graded meshes.
  Eigen::VectorXd scale(static_cast<Eigen::Index>(n));
  for (int i = 0; i < a.n(); ++i) {
    const double d = a.at(i, i);
    scale[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(a.nnz());
  for (int i = 0; i < a.n(); ++i) {
    for (int k = a.row_ptr()[static_cast<std::size_t>(i)]; k < a.row_ptr()[static_cast<std::size_t>(i) + 1]; ++k) {
      const int j = a.col_idx()[static_cast<std::size_t>(k)];
      trip.emplace_back(i, j, a.values()[static_cast<std::size_t>(k)]);
    }
  }
  Eigen::SparseMatrix<double> m(a.n(), a.n());
  m.setFromTriplets(trip.begin(), trip.end());
  const Eigen::SparseMatrix<double> scaled = scale.asDiagonal() * m * scale.asDiagonal();
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(scaled);
  if (llt.info() != Eigen::Success) return out;
  auto apply_inverse = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return scale.asDiagonal() * llt.solve(scale.asDiagonal() * v);
  };

  Eigen::Map<Eigen::VectorXd> x(out.x.data(), static_cast<Eigen::Index>(n));
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(n));
  x = apply_inverse(rhs);
  Eigen::VectorXd r = rhs - m * x;
  double res = r.norm() / bnorm;
  constexpr int kMaxRefinements = 5;
  int steps = 0;
  while (res > 1e-3 * tol && steps < kMaxRefinements) {
    const Eigen::VectorXd candidate = x + apply_inverse(r);
    const Eigen::VectorXd r_new = rhs - m * candidate;
    const double res_new = r_new.norm() / bnorm;
    ++steps;
    if (!(res_new < res)) break;
    x = candidate;
    r = r_new;
    res = res_new;
  }
  out.report.iterations = steps;
  out.report.relative_residual = res;
  out.report.converged = res <= tol;
  return out;
}

std::vector<double> dense_solve(const SparseSym& a, std::span<const double> b) {
  if (a.n() > kDenseFallbackLimit) throw std::invalid_argument("dense_solve: system too large");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.n(), a.n());
  for (int i = 0; i < a.n(); ++i) {
    for (int k = a.row_ptr()[static_cast<std::size_t>(i)]; k < a.row_ptr()[static_cast<std::size_t>(i) + 1]; ++k) {
      m(i, a.col_idx()[static_cast<std::size_t>(k)]) = a.values()[static_cast<std::size_t>(k)];
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw std::runtime_error("dense_solve: matrix is not positive definite");
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = llt.solve(rhs);
  return {x.data(), x.data() + x.size()};
}

}  // namespace fluxls
