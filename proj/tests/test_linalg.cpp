#include <gtest/gtest.h>

#include <random>

#include "fdswipt/linalg.hpp"

namespace {

using namespace fdswipt;
using namespace fdswipt::linalg;

ComplexMatrix random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix a(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return a;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
  const ComplexMatrix a = random_matrix(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

void expect_eig_invariants(const ComplexMatrix& a, const HermitianEig& e) {
  const ComplexMatrix& v = e.eigenvectors;
  const ComplexMatrix rec = v * e.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
  EXPECT_LE((a - rec).norm(), 1e-10 * (1 + a.norm()));
  EXPECT_LE((v.adjoint() * v - ComplexMatrix::Identity(a.rows(), a.rows())).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i) EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
}

TEST(HermitianEig, Identity) {
  const ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  const auto e = hermitian_eig(a);
  EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), 1.0, 1e-14);
  expect_eig_invariants(a, e);
}

TEST(HermitianEig, DiagonalIsSortedDescending) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = 3.0;
  const auto e = hermitian_eig(a);
  EXPECT_DOUBLE_EQ(e.eigenvalues(0), 3.0);
  EXPECT_DOUBLE_EQ(e.eigenvalues(1), -1.0);
  EXPECT_NEAR(std::abs(e.eigenvectors(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 1)), 1.0, 1e-14);
}

TEST(HermitianEig, RankOneOuterProduct) {
  ComplexVector h(2);
  h << Complex(1, 0), Complex(0, 1);
  h /= std::sqrt(2.0);
  const ComplexMatrix a = outer(h);
  const auto e = hermitian_eig(a);
  EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), 0.0, 1e-14);
  // |<u, h>| = 1 means u is h up to phase.
  EXPECT_NEAR(std::abs(e.eigenvectors.col(0).dot(h)), 1.0, 1e-12);
  expect_eig_invariants(a, e);
}

TEST(HermitianEig, RejectsBadInput) {
  EXPECT_THROW(hermitian_eig(ComplexMatrix::Zero(2, 3)), ContractViolation);
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eig(a), ContractViolation);
}

TEST(HermitianEig, RandomTraceAndInvariants) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 16; ++n) {
    const ComplexMatrix a = random_hermitian(rng, n);
    const auto e = hermitian_eig(a);
    const double tr = a.trace().real();
    EXPECT_NEAR(e.eigenvalues.sum(), tr, 1e-9 * std::max(1.0, std::abs(tr)) + 1e-12 * a.norm());
    expect_eig_invariants(a, e);
  }
}

TEST(NullSpace, CoordinateAxis) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 1);
  h(0, 0) = 1.0;
  const ComplexMatrix u = null_space_basis(h);
  ASSERT_EQ(u.cols(), 1);
  EXPECT_LE(std::abs(u(0, 0)), 1e-10);
  EXPECT_NEAR(std::abs(u(1, 0)), 1.0, 1e-12);
}

TEST(NullSpace, NoColumnsGivesIdentity) {
  const ComplexMatrix u = null_space_basis(ComplexMatrix(3, 0));
  EXPECT_TRUE(u.isApprox(ComplexMatrix::Identity(3, 3)));
}

TEST(NullSpace, RandomBasisAndProjector) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int nt = 2 + trial % 6;
    const int cols = 1 + trial % nt;
    const ComplexMatrix h = random_matrix(rng, nt, std::min(cols, nt - 1));
    const ComplexMatrix u = null_space_basis(h);
    EXPECT_EQ(u.cols(), nt - h.cols());
    EXPECT_LE((h.adjoint() * u).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff(), 1e-10);
    const ComplexMatrix p = u * u.adjoint();
    EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((p.adjoint() - p).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(NullSpace, CollinearColumnsGiveLargerSpace) {
  std::mt19937_64 rng(3);
  const ComplexMatrix c = random_matrix(rng, 4, 1);
  ComplexMatrix h(4, 2);
  h.col(0) = c;
  h.col(1) = Complex(0, 2) * c;
  const ComplexMatrix u = null_space_basis(h);
  EXPECT_EQ(u.cols(), 3);
  EXPECT_LE((h.adjoint() * u).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SpectralNorm, Examples) {
  EXPECT_NEAR(spectral_norm(ComplexMatrix::Identity(3, 3)), 1.0, 1e-14);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 0.5;
  EXPECT_NEAR(spectral_norm(d), 2.0, 1e-14);
  ComplexMatrix j = ComplexMatrix::Zero(2, 2);
  j(0, 1) = 1.0;
  EXPECT_NEAR(spectral_norm(j), 1.0, 1e-14);
}

TEST(SpectralNorm, BoundedByFrobeniusAndMatchesEig) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 1 + trial % 5, 1 + trial % 7);
    const double s = spectral_norm(a);
    EXPECT_LE(s, frobenius_norm(a) * (1 + 1e-12));
    // Largest eigenvalue of A^H A is s^2.
    const double top = hermitian_eig(a.adjoint() * a).eigenvalues(0);
    EXPECT_NEAR(s * s, top, 1e-10 * top);
  }
}

TEST(SolveHermitianPd, Examples) {
  ComplexVector b(2);
  b << 1.0, 2.0;
  EXPECT_TRUE(solve_hermitian_pd(ComplexMatrix::Identity(2, 2), b).isApprox(b));

  b << 4.0, 0.0;
  const ComplexVector x2 = solve_hermitian_pd(2.0 * ComplexMatrix::Identity(2, 2), b);
  EXPECT_NEAR(std::abs(x2(0) - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(x2(1)), 0.0, 1e-14);

  ComplexMatrix a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  b << 1.0, 1.0;
  const ComplexVector x3 = solve_hermitian_pd(a, b);
  EXPECT_NEAR(std::abs(x3(0) - 1.0 / 3), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(x3(1) - 1.0 / 3), 0.0, 1e-14);
}

TEST(SolveHermitianPd, RandomResidual) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 12; ++n) {
    const ComplexMatrix m = random_matrix(rng, n, n);
    const ComplexMatrix a = m * m.adjoint() + 0.1 * ComplexMatrix::Identity(n, n);
    const ComplexVector b = random_matrix(rng, n, 1);
    const ComplexVector x = solve_hermitian_pd(a, b);
    EXPECT_LE((a * x - b).norm(), 1e-10 * b.norm());
  }
}

TEST(SolveHermitianPd, SingularAndIndefiniteRejected) {
  ComplexVector b = ComplexVector::Ones(2);
  ComplexMatrix s(2, 2);
  s << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(solve_hermitian_pd(s, b), SingularMatrixError);
  ComplexMatrix ind(2, 2);
  ind << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(solve_hermitian_pd(ind, b), SingularMatrixError);
}

}  // namespace
