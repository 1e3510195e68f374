#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fluxls/linalg.hpp"

using namespace fluxls;

namespace {

SparseSym diagonal(const std::vector<double>& d) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({static_cast<int>(i), static_cast<int>(i), d[i]});
  return SparseSym::from_triplets(static_cast<int>(d.size()), t);
}

// Random SPD matrix B^T B + n I, kept dense for the oracle.
std::vector<std::vector<double>> random_spd(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> b(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : b) {
    for (double& v : row) v = g(rng);
  }
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = i == j ? n : 0.0;
      for (int k = 0; k < n; ++k) s += b[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
    }
  }
  return a;
}

SparseSym to_sparse(const std::vector<std::vector<double>>& a) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) t.push_back({static_cast<int>(i), static_cast<int>(j), a[i][j]});
  }
  return SparseSym::from_triplets(static_cast<int>(a.size()), t);
}

// Gaussian elimination with partial pivoting: the dense oracle.
std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

TEST(SparseSym, DuplicatesSumAndLookup) {
  const std::vector<Triplet> t{{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {0, 0, 3.0}, {1, 1, 5.0}};
  const auto a = SparseSym::from_triplets(2, t);
  EXPECT_EQ(a.nnz(), 4u);
  EXPECT_EQ(a.at(0, 0), 4.0);
  EXPECT_EQ(a.at(0, 1), 2.0);
  EXPECT_EQ(a.at(1, 1), 5.0);
  EXPECT_EQ(a.asymmetry(), 0.0);
  const auto y = a.multiply(std::vector<double>{1.0, 1.0});
  EXPECT_EQ(y[0], 6.0);
  EXPECT_EQ(y[1], 7.0);
}

TEST(SparseSym, AsymmetryDetected) {
  const std::vector<Triplet> t{{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 1.5}, {1, 1, 1.0}};
  EXPECT_DOUBLE_EQ(SparseSym::from_triplets(2, t).asymmetry(), 0.5);
}

TEST(SparseSym, ScaledKeepsSymmetry) {
  std::mt19937 rng(5);
  const auto a = to_sparse(random_spd(12, rng));
  std::vector<double> s(12);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 / std::sqrt(a.at(static_cast<int>(i), static_cast<int>(i)));
  const auto b = a.scaled(s);
  EXPECT_LE(b.asymmetry(), 1e-15);
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(b.at(i, i), 1.0, 1e-15);
}

TEST(CgSolve, IdentityOneIteration) {
  const auto a = diagonal({1, 1, 1, 1});
  const std::vector<double> b{1, -2, 3, 0.5};
  const auto r = cg_solve(a, b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_DOUBLE_EQ(r.x[i], b[i]);
}

TEST(CgSolve, DiagonalSystem) {
  const auto a = diagonal({1, 2, 3});
  for (auto pre : {Preconditioner::none, Preconditioner::jacobi}) {
    const auto r = cg_solve(a, std::vector<double>{1, 2, 3}, 1e-12, 0, pre);
    EXPECT_TRUE(r.report.converged);
    for (double v : r.x) EXPECT_NEAR(v, 1.0, 1e-12);
  }
}

TEST(CgSolve, ZeroRightHandSide) {
  const auto a = diagonal({1, 2, 3});
  const auto r = cg_solve(a, std::vector<double>(3, 0.0));
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 0);
  for (double v : r.x) EXPECT_EQ(v, 0.0);
}

TEST(CgSolve, RandomSpdMatchesDenseOracle) {
  std::mt19937 rng(42);
  const auto dense = random_spd(50, rng);
  const auto a = to_sparse(dense);
  std::normal_distribution<double> g;
  std::vector<double> b(50);
  for (double& v : b) v = g(rng);
  const auto oracle = gauss_solve(dense, b);
  for (auto pre : {Preconditioner::none, Preconditioner::jacobi}) {
    const auto r = cg_solve(a, b, 1e-12, 0, pre);
    ASSERT_TRUE(r.report.converged);
    EXPECT_LE(r.report.relative_residual, 1e-12);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(r.x[i], oracle[i], 1e-8);
  }
  const auto c = cholesky_solve(a, b);
  ASSERT_TRUE(c.report.converged);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(c.x[i], oracle[i], 1e-8);
  const auto d = dense_solve(a, b);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(d[i], oracle[i], 1e-8);
}

TEST(CgSolve, ReportsNonConvergence) {
  std::mt19937 rng(1);
  const auto a = to_sparse(random_spd(30, rng));
  std::vector<double> b(30, 1.0);
  const auto r = cg_solve(a, b, 1e-14, 2);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 2);
  EXPECT_GT(r.report.relative_residual, 1e-14);
}

TEST(CgSolve, ConvergedImpliesResidualWithinTolerance) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = to_sparse(random_spd(20 + trial, rng));
    std::vector<double> b(static_cast<std::size_t>(a.n()));
    std::normal_distribution<double> g;
    for (double& v : b) v = g(rng);
    for (double tol : {1e-4, 1e-8, 1e-12}) {
      const auto r = cg_solve(a, b, tol);
      ASSERT_TRUE(r.report.converged);
      auto ax = a.multiply(r.x);
      for (std::size_t i = 0; i < ax.size(); ++i) ax[i] = b[i] - ax[i];
      EXPECT_LE(norm2(ax) / norm2(b), tol);
    }
  }
}

TEST(CgSolve, Deterministic) {
  std::mt19937 rng(4);
  const auto a = to_sparse(random_spd(40, rng));
  std::vector<double> b(40);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(static_cast<double>(i));
  const auto r1 = cg_solve(a, b), r2 = cg_solve(a, b);
  EXPECT_EQ(r1.x, r2.x);
  const auto c1 = cholesky_solve(a, b), c2 = cholesky_solve(a, b);
  EXPECT_EQ(c1.x, c2.x);
}

TEST(DenseSolve, LimitsAndNonSpd) {
  const std::vector<Triplet> t{{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}};
  EXPECT_THROW(dense_solve(SparseSym::from_triplets(2, t), std::vector<double>{1, 1}), std::runtime_error);
  const auto big = diagonal(std::vector<double>(kDenseFallbackLimit + 1, 1.0));
  EXPECT_THROW(dense_solve(big, std::vector<double>(kDenseFallbackLimit + 1, 1.0)), std::invalid_argument);
}
