#pragma once

#include <algorithm>
#include <cmath>

#include "fdswipt/sdp/conic_problem.hpp"

namespace fdswipt::sdp {

namespace detail {

inline double min_eig_hermitian(const ComplexMatrix& a) {
  if (a.rows() == 1) return a(0, 0).real();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Membership violation of x in the block's cone (0 when inside).
inline double cone_violation(const BlockSpec& spec, const ComplexMatrix& x) {
  switch (spec.kind) {
    case BlockKind::kFree: return 0.0;
    case BlockKind::kNonneg: return std::max(0.0, -x(0, 0).real());
    case BlockKind::kHermitianPsd:
    case BlockKind::kSymmetricPsd: return std::max(0.0, -min_eig_hermitian(x));
  }
  return 0.0;
}

}  // namespace detail

/// Dual slack C_b - sum_i y_i A_ib for every block.
inline std::vector<ComplexMatrix> dual_slack(const ConicProblem& p, const RealVector& y) {
  std::vector<ComplexMatrix> s;
  s.reserve(p.blocks.size());
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const int n = p.blocks[b].dim;
    s.push_back(p.objective.coefficient(static_cast<int>(b), n));
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    for (const auto& [b, c] : p.constraints[i].lhs.terms()) s[b] -= y(i) * c;
  }
  return s;
}

/// KKT residuals from problem data and the reported primal/dual point only.
inline KktResiduals kkt_residuals(const ConicProblem& p, const ConicSolution& sol) {
  KktResiduals r;
  const auto& x = sol.primal;
  const RealVector& y = sol.duals;

  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    const double lhs = c.lhs.evaluate(x);
    const double viol = c.relation == Relation::kEqual ? std::abs(lhs - c.rhs) : std::max(0.0, c.rhs - lhs);
    r.primal = std::max(r.primal, viol);
  }
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    r.primal = std::max(r.primal, detail::cone_violation(p.blocks[b], x[b]));
  }

  const auto s = dual_slack(p, y);
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const double v = p.blocks[b].kind == BlockKind::kFree ? std::abs(s[b](0, 0).real())
                                                          : detail::cone_violation(p.blocks[b], s[b]);
    r.dual = std::max(r.dual, v);
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (p.constraints[i].relation == Relation::kGreaterEqual) r.dual = std::max(r.dual, -y(i));
  }

  double dobj = 0.0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) dobj += y(i) * p.constraints[i].rhs;
  r.gap = p.objective.evaluate(x) - dobj;
  return r;
}

}  // namespace fdswipt::sdp
