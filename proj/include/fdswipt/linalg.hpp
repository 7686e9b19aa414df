#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "fdswipt/errors.hpp"

namespace fdswipt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace linalg {

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted in descending order.
/// Column i of `eigenvectors` belongs to `eigenvalues[i]`.
struct HermitianEig {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

inline constexpr double kHermitianTol = 1e-12;

inline bool all_finite(const ComplexMatrix& a) {
  return a.allFinite();
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

inline HermitianEig hermitian_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ContractViolation("hermitian_eig: matrix is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", expected square");
  }
  if (!all_finite(a)) throw ContractViolation("hermitian_eig: non-finite entry");
  if (!is_hermitian(a)) throw ContractViolation("hermitian_eig: matrix is not Hermitian");

  const Eigen::Index n = a.rows();
  HermitianEig out;
  if (n == 0) return out;

  // Symmetrize exactly so roundoff in the lower triangle cannot leak in.
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eig: no convergence");

  // Eigen returns ascending order.
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

/// Largest singular value.
inline double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

inline double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

/// Orthonormal basis U of the null space of H^H, i.e. H^H U = 0.
///
/// H is N_t x (K-1). Rank is decided at 1e-10 times the largest singular
/// value, so collinear columns yield the larger null space. With zero columns
/// the whole space is returned.
inline ComplexMatrix null_space_basis(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  if (h.cols() == 0) return ComplexMatrix::Identity(n, n);
  if (!all_finite(h)) throw ContractViolation("null_space_basis: non-finite entry");

  // Left singular vectors of H beyond its rank span null(H^H).
  Eigen::JacobiSVD<ComplexMatrix> svd(h, Eigen::ComputeFullU);
  const RealVector& sv = svd.singularValues();
  const double cutoff = 1e-10 * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return svd.matrixU().rightCols(n - rank);
}

/// Solves A x = b for Hermitian positive definite A via Cholesky.
inline ComplexVector solve_hermitian_pd(const ComplexMatrix& a, const ComplexVector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw ContractViolation("solve_hermitian_pd: dimension mismatch");
  }
  if (!is_hermitian(a)) throw ContractViolation("solve_hermitian_pd: matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  if (ev.size() > 0) {
    const double lmax = ev(ev.size() - 1);
    const double lmin = ev(0);
    if (!(lmax > 0.0) || lmin <= 1e-12 * lmax) {
      throw SingularMatrixError("solve_hermitian_pd: matrix is not positive definite (min eig " +
                                std::to_string(lmin) + ", max eig " + std::to_string(lmax) + ")");
    }
  }
  Eigen::LLT<ComplexMatrix> llt(sym);
  if (llt.info() != Eigen::Success) throw SingularMatrixError("solve_hermitian_pd: Cholesky failed");
  return llt.solve(b);
}

/// Outer product h h^H.
inline ComplexMatrix outer(const ComplexVector& h) { return h * h.adjoint(); }

}  // namespace linalg
}  // namespace fdswipt
