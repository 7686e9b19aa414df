#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fdswipt/errors.hpp"
#include "fdswipt/linalg.hpp"

namespace fdswipt::sdp {

enum class BlockKind {
  kHermitianPsd,  // n x n complex Hermitian, X >= 0
  kSymmetricPsd,  // n x n real symmetric, X >= 0
  kNonneg,        // scalar x >= 0
  kFree,          // scalar, unconstrained
};

struct BlockSpec {
  BlockKind kind = BlockKind::kNonneg;
  int dim = 1;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

inline BlockSpec hermitian_psd(int n) { return {BlockKind::kHermitianPsd, n}; }
inline BlockSpec symmetric_psd(int n) { return {BlockKind::kSymmetricPsd, n}; }
inline BlockSpec real_2x2_psd() { return {BlockKind::kSymmetricPsd, 2}; }
inline BlockSpec nonneg_scalar() { return {BlockKind::kNonneg, 1}; }
inline BlockSpec free_scalar() { return {BlockKind::kFree, 1}; }

inline bool is_scalar(const BlockSpec& b) {
  return b.kind == BlockKind::kNonneg || b.kind == BlockKind::kFree;
}

/// Real linear functional sum_b Re tr(C_b X_b).
///
/// Every coefficient matrix is stored Hermitian (real symmetric for real
/// blocks, 1x1 for scalars). Terms on the same block accumulate.
class LinearFunctional {
 public:
  /// Adds Re tr(C X_block). C must be Hermitian.
  LinearFunctional& add(int block, const ComplexMatrix& coeff) {
    for (auto& [b, c] : terms_) {
      if (b == block) {
        c += coeff;
        return *this;
      }
    }
    terms_.emplace_back(block, coeff);
    return *this;
  }

  /// Adds value * Re(X_ij) for a matrix block; for i != j the coefficient is
  /// split over (i, j) and (j, i) so that X_ij and X_ji count once together.
  LinearFunctional& add_entry(int block, int dim, int i, int j, double value) {
    ComplexMatrix c = ComplexMatrix::Zero(dim, dim);
    if (i == j) {
      c(i, i) = value;
    } else {
      c(i, j) = 0.5 * value;
      c(j, i) = 0.5 * value;
    }
    return add(block, c);
  }

  /// Adds value * x for a scalar block.
  LinearFunctional& add_scalar(int block, double value) {
    return add(block, ComplexMatrix::Constant(1, 1, Complex(value, 0.0)));
  }

  const std::vector<std::pair<int, ComplexMatrix>>& terms() const { return terms_; }

  /// Coefficient of `block`, or a zero matrix of size `dim`.
  ComplexMatrix coefficient(int block, int dim) const {
    for (const auto& [b, c] : terms_) {
      if (b == block) return c;
    }
    return ComplexMatrix::Zero(dim, dim);
  }

  double evaluate(const std::vector<ComplexMatrix>& x) const {
    double v = 0.0;
    for (const auto& [b, c] : terms_) v += (c * x[b]).trace().real();
    return v;
  }

 private:
  std::vector<std::pair<int, ComplexMatrix>> terms_;
};

enum class Relation { kEqual, kGreaterEqual };

struct Constraint {
  LinearFunctional lhs;
  Relation relation = Relation::kEqual;
  double rhs = 0.0;
};

struct ConicProblem {
  std::vector<BlockSpec> blocks;
  LinearFunctional objective;  // minimized
  std::vector<Constraint> constraints;

  int add_block(BlockSpec spec) {
    blocks.push_back(spec);
    return static_cast<int>(blocks.size()) - 1;
  }

  int add_constraint(LinearFunctional lhs, Relation rel, double rhs) {
    constraints.push_back({std::move(lhs), rel, rhs});
    return static_cast<int>(constraints.size()) - 1;
  }

  void validate() const {
    for (const auto& b : blocks) {
      if (b.dim < 1) throw ContractViolation("ConicProblem: block dimension must be >= 1");
      if (is_scalar(b) && b.dim != 1) throw ContractViolation("ConicProblem: scalar block with dim != 1");
    }
    auto check = [&](const LinearFunctional& f, const std::string& where) {
      for (const auto& [b, c] : f.terms()) {
        if (b < 0 || b >= static_cast<int>(blocks.size())) {
          throw ContractViolation("ConicProblem: " + where + " references undeclared block " +
                                  std::to_string(b));
        }
        const int n = blocks[b].dim;
        if (c.rows() != n || c.cols() != n) {
          throw ContractViolation("ConicProblem: " + where + " coefficient has wrong shape");
        }
        if (!c.allFinite()) throw ContractViolation("ConicProblem: " + where + " has non-finite data");
        const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
        if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
          throw ContractViolation("ConicProblem: " + where + " coefficient is not Hermitian");
        }
        if (blocks[b].kind != BlockKind::kHermitianPsd && c.imag().cwiseAbs().maxCoeff() > 0.0) {
          throw ContractViolation("ConicProblem: " + where + " has imaginary data on a real block");
        }
      }
    };
    check(objective, "objective");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      check(constraints[i].lhs, "constraint " + std::to_string(i));
      if (!std::isfinite(constraints[i].rhs)) {
        throw ContractViolation("ConicProblem: constraint " + std::to_string(i) + " rhs not finite");
      }
    }
  }
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kMaxIter, kNumericalTrouble };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kUnbounded: return "Unbounded";
    case SolveStatus::kMaxIter: return "MaxIter";
    case SolveStatus::kNumericalTrouble: return "NumericalTrouble";
  }
  return "?";
}

/// Absolute residuals. `primal` and `dual` include cone-membership violations;
/// `gap` is the signed difference primal objective minus dual objective.
struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::kNumericalTrouble;
  std::vector<ComplexMatrix> primal;  // one matrix per block, 1x1 for scalars
  RealVector duals;                   // one multiplier per constraint
  double objective = 0.0;
  double dual_objective = 0.0;
  KktResiduals kkt;
  int iterations = 0;
  int restarts = 0;
  // Homogeneous embedding scalars at exit.
  double tau = 0.0;
  double kappa = 0.0;
  // On Infeasible/Unbounded: normalized improving-ray residual.
  double certificate_residual = 0.0;
};

}  // namespace fdswipt::sdp
