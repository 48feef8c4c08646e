#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eigenbound/errors.hpp"
#include "eigenbound/smalleig.hpp"
#include "eigenbound/sparse.hpp"

using namespace eigenbound;

namespace {

DenseSymMatrix random_spd(std::mt19937_64& rng, std::size_t n, double shift = 0.5) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> g(n * n);
  for (auto& v : g) v = u(rng);
  DenseSymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = i == j ? shift : 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g[i * n + k] * g[j * n + k];
      m.set(i, j, s);
    }
  return m;
}

// Roots of det(A - l B) = 0 for 2x2 matrices, written out as a quadratic.
std::pair<double, double> quadratic_pencil(const DenseSymMatrix& a, const DenseSymMatrix& b) {
  const double qa = b(0, 0) * b(1, 1) - b(0, 1) * b(0, 1);
  const double qb = -(a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - 2.0 * a(0, 1) * b(0, 1));
  const double qc = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
  const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  return {(-qb - disc) / (2.0 * qa), (-qb + disc) / (2.0 * qa)};
}

}  // namespace

TEST(Cholesky, HandExample) {
  const CholeskyFactor f(DenseSymMatrix::from_rows({{4.0, 2.0}, {2.0, 5.0}}));
  EXPECT_DOUBLE_EQ(f.lower(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(f.lower(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(f.lower(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(f.lower(0, 1), 0.0);
}

TEST(Cholesky, IdentityFactorsToIdentity) {
  const CholeskyFactor f(DenseSymMatrix::identity(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(f.lower(i, j), i == j ? 1.0 : 0.0);
}

TEST(Cholesky, IndefiniteReportsPivot) {
  try {
    CholeskyFactor f(DenseSymMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}}));
    FAIL() << "expected DefinitenessError";
  } catch (const DefinitenessError& e) {
    EXPECT_NE(std::string(e.what()).find("pivot 2"), std::string::npos) << e.what();
  }
}

TEST(Cholesky, ReconstructionAndSolve) {
  std::mt19937_64 rng(3);
  const std::size_t n = 20;
  const DenseSymMatrix m = random_spd(rng, n);
  const CholeskyFactor f(m);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += f.lower(i, k) * f.lower(j, k);
      worst = std::max(worst, std::abs(s - m(i, j)));
    }
  EXPECT_LE(worst, 1e-12 * static_cast<double>(n) * m.max_abs());

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(static_cast<double>(i));
  const auto b = m.multiply(x);
  const auto y = f.solve(b);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y[i], x[i], 1e-10);
}

TEST(DenseSym, FromRowsChecksSymmetry) {
  EXPECT_THROW(DenseSymMatrix::from_rows({{1.0, 2.0}, {3.0, 1.0}}), ContractError);
  EXPECT_THROW(DenseSymMatrix::from_rows({{1.0, 2.0}}), ContractError);
}

TEST(GenEigSmall, DiagonalPencil) {
  const auto s = gen_eig_small(DenseSymMatrix::from_rows({{2.0, 0.0}, {0.0, 1.0}}), DenseSymMatrix::identity(2));
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_DOUBLE_EQ(s.values[0], 1.0);
  EXPECT_DOUBLE_EQ(s.values[1], 2.0);
}

TEST(GenEigSmall, CoupledPencilMatchesQuadratic) {
  const auto a = DenseSymMatrix::from_rows({{1.3, 0.4}, {0.4, 1.3}});
  const auto b = DenseSymMatrix::from_rows({{1.0, 0.3}, {0.3, 1.0}});
  const auto [lo, hi] = quadratic_pencil(a, b);
  const auto s = gen_eig_small(a, b);
  EXPECT_NEAR(s.values[0], lo, 1e-14);
  EXPECT_NEAR(s.values[1], hi, 1e-14);
  EXPECT_NEAR(s.values[0], 0.9 / 0.7, 1e-14);
  EXPECT_NEAR(s.values[1], 1.7 / 1.3, 1e-14);
}

TEST(GenEigSmall, ScalarMultipleGivesConstant) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 6; ++n) {
    const DenseSymMatrix b = random_spd(rng, n);
    const auto s = gen_eig_small(b.scaled(2.5), b);
    for (double v : s.values) EXPECT_NEAR(v, 2.5, 1e-12);
  }
}

TEST(GenEigSmall, RejectsIndefiniteB) {
  EXPECT_THROW(gen_eig_small(DenseSymMatrix::identity(2), DenseSymMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}})),
               DefinitenessError);
  EXPECT_THROW(gen_eig_small(DenseSymMatrix::identity(7), DenseSymMatrix::identity(7)), ContractError);
}

TEST(Jacobi, TridiagonalToeplitz) {
  const std::size_t n = 12;
  DenseSymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, 2.0);
    if (i + 1 < n) m.set(i, i + 1, -1.0);
  }
  const auto values = jacobi_eigenvalues(m);
  for (std::size_t k = 0; k < n; ++k) {
    const double exact = 2.0 - 2.0 * std::cos(static_cast<double>(k + 1) * std::numbers::pi / static_cast<double>(n + 1));
    EXPECT_NEAR(values[k], exact, 1e-13);
  }
}

TEST(GenEigDense, IdenticalPencilGivesOnes) {
  std::mt19937_64 rng(5);
  const DenseSymMatrix a = random_spd(rng, 30);
  const auto eig = gen_eig_dense(a, a);
  for (double v : eig.values) EXPECT_NEAR(v, 1.0, 1e-10);
}

TEST(GenEigDense, SparseOverload) {
  const auto a = SymmetricSparseMatrix::from_upper_triplets(2, {{0, 0, 2.0}, {1, 1, 1.0}});
  const auto b = SymmetricSparseMatrix::from_upper_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
  const Spectrum s = gen_eig_dense(a, b);
  EXPECT_NEAR(s.values[0], 1.0, 1e-14);
  EXPECT_NEAR(s.values[1], 2.0, 1e-14);
}

TEST(GenEigDense, ScalingEquivariance) {
  std::mt19937_64 rng(9);
  const DenseSymMatrix a = random_spd(rng, 25);
  const DenseSymMatrix b = random_spd(rng, 25);
  const auto s1 = gen_eig_dense(a, b);
  const auto s3 = gen_eig_dense(a.scaled(3.0), b);
  for (std::size_t i = 0; i < s1.values.size(); ++i) EXPECT_NEAR(s3.values[i], 3.0 * s1.values[i], 1e-12 * 3.0 * s1.values[i]);
}

TEST(GenEigDense, ResidualsAreSmall) {
  std::mt19937_64 rng(21);
  const DenseSymMatrix a = random_spd(rng, 80);
  const DenseSymMatrix b = random_spd(rng, 80, 2.0);
  DenseEigOptions opt;
  opt.want_vectors = true;
  const auto eig = gen_eig_dense(a, b, opt);
  ASSERT_EQ(eig.vectors.size(), 80u);
  EXPECT_LE(max_relative_residual(a, b, eig), 1e-8);
  for (std::size_t i = 1; i < eig.values.size(); ++i) EXPECT_LE(eig.values[i - 1], eig.values[i]);
}

TEST(GenEigDense, DeflatesSharedConstantKernel) {
  // Cycle graph Laplacian against n I - J: both annihilate constants and
  // share the Fourier modes, so the deflated spectrum is (2 - 2 cos(2 pi k / n)) / n.
  const std::size_t n = 10;
  DenseSymMatrix a(n);
  DenseSymMatrix b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.set(i, i, 2.0);
    a.set(i, (i + 1) % n, -1.0);
    for (std::size_t j = 0; j < n; ++j) b.set(i, j, (i == j ? static_cast<double>(n) : 0.0) - 1.0);
  }
  DenseEigOptions opt;
  opt.deflate_kernel = true;
  const auto eig = gen_eig_dense(a, b, opt);
  ASSERT_EQ(eig.values.size(), n - 1);
  std::vector<double> exact;
  for (std::size_t k = 1; k < n; ++k)
    exact.push_back((2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n))) /
                    static_cast<double>(n));
  std::sort(exact.begin(), exact.end());
  for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_NEAR(eig.values[i], exact[i], 1e-12);
}

TEST(GenEigDense, KernelMismatchIsReported) {
  const std::size_t n = 4;
  DenseSymMatrix a = DenseSymMatrix::identity(n);  // constants are not in its kernel
  DenseSymMatrix b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b.set(i, j, (i == j ? 4.0 : 0.0) - 1.0);
  DenseEigOptions opt;
  opt.deflate_kernel = true;
  EXPECT_THROW(gen_eig_dense(a, b, opt), KernelError);
}

TEST(GenEigDense, IndefiniteBIsRejected) {
  EXPECT_THROW(gen_eig_dense(DenseSymMatrix::identity(2), DenseSymMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}})),
               DefinitenessError);
}

TEST(GenEigDense, AgreesWithSmallSolver) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    const DenseSymMatrix a = random_spd(rng, n);
    const DenseSymMatrix b = random_spd(rng, n);
    const auto s = gen_eig_small(a, b);
    const auto d = gen_eig_dense(a, b);
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_NEAR(s.values[i], d.values[i], 1e-10 * std::max(1.0, std::abs(d.values[i])));
  }
}
