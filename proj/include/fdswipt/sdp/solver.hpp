#pragma once

// Dense primal-dual interior-point solver for small conic programs over
// products of PSD cones, the nonnegative orthant and free variables.
//
// Internally the problem is put in the real form
//
//   min c.x   s.t.  A x = b,  x in K,
//
// with Hermitian n x n blocks realified as 2n x 2n symmetric blocks through
// [[Re, -Im], [Im, Re]] and their coefficients halved, and every ">=" row
// given its own nonnegative slack. The iteration runs on the homogeneous
// self-dual embedding
//
//   A x - b tau = 0,   A^T y + s - c tau = 0,   c.x - b.y + kappa = 0,
//
// using Nesterov-Todd scaling and a Mehrotra predictor-corrector. tau/kappa
// decides between an optimal point and an infeasibility certificate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "fdswipt/sdp/conic_problem.hpp"
#include "fdswipt/sdp/kkt.hpp"

namespace fdswipt::sdp {

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 100;
  double infeasibility_ratio = 1e-8;  // tau <= ratio * kappa => infeasible
  double step_fraction = 0.98;
  double initial_scale = 1.0;
  // Centering steps after tolerances are met, until ||XS - mu I|| <= center_tol * mu.
  double center_tol = 1e-4;
  int max_center_steps = 10;
};

namespace detail {

inline RealMatrix embed_hermitian(const ComplexMatrix& c) {
  const Eigen::Index n = c.rows();
  RealMatrix r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = c.real();
  r.topRightCorner(n, n) = -c.imag();
  r.bottomLeftCorner(n, n) = c.imag();
  r.bottomRightCorner(n, n) = c.real();
  return r;
}

inline ComplexMatrix unembed_hermitian(const RealMatrix& x) {
  const Eigen::Index n = x.rows() / 2;
  const RealMatrix re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  const RealMatrix im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  ComplexMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

inline RealMatrix sym(const RealMatrix& a) { return 0.5 * (a + a.transpose()); }

inline double inner(const RealMatrix& a, const RealMatrix& b) { return a.cwiseProduct(b).sum(); }

struct PsdBlock {
  int source = -1;
  bool complex = false;
  int dim = 0;
  RealMatrix c;
  std::vector<RealMatrix> a;
  std::vector<char> nz;
};

struct RealForm {
  std::vector<PsdBlock> psd;
  RealMatrix a_lp;  // m x n_lp
  RealVector c_lp;
  std::vector<int> lp_source;  // source block, or -1 for a row slack
  RealMatrix a_free;           // m x n_free
  RealVector c_free;
  std::vector<int> free_source;
  RealVector b;
  int m = 0;
  int degree = 0;  // barrier parameter of K
};

inline RealForm to_real_form(const ConicProblem& p) {
  RealForm f;
  f.m = static_cast<int>(p.constraints.size());
  const int m = f.m;
  f.b.resize(m);
  for (int i = 0; i < m; ++i) f.b(i) = p.constraints[i].rhs;

  std::vector<int> lp_cols, free_cols;
  int n_ge = 0;
  for (const auto& c : p.constraints) n_ge += c.relation == Relation::kGreaterEqual;

  for (std::size_t bi = 0; bi < p.blocks.size(); ++bi) {
    const auto& spec = p.blocks[bi];
    const int src = static_cast<int>(bi);
    if (spec.kind == BlockKind::kNonneg) {
      f.lp_source.push_back(src);
    } else if (spec.kind == BlockKind::kFree) {
      f.free_source.push_back(src);
    } else {
      PsdBlock blk;
      blk.source = src;
      blk.complex = spec.kind == BlockKind::kHermitianPsd;
      blk.dim = blk.complex ? 2 * spec.dim : spec.dim;
      auto convert = [&](const ComplexMatrix& coeff) -> RealMatrix {
        return blk.complex ? RealMatrix(0.5 * embed_hermitian(coeff)) : sym(coeff.real());
      };
      blk.c = convert(p.objective.coefficient(src, spec.dim));
      blk.a.resize(m);
      blk.nz.resize(m);
      for (int i = 0; i < m; ++i) {
        blk.a[i] = convert(p.constraints[i].lhs.coefficient(src, spec.dim));
        blk.nz[i] = blk.a[i].cwiseAbs().maxCoeff() > 0.0;
      }
      f.psd.push_back(std::move(blk));
    }
  }

  const int n_lp = static_cast<int>(f.lp_source.size()) + n_ge;
  f.a_lp = RealMatrix::Zero(m, n_lp);
  f.c_lp = RealVector::Zero(n_lp);
  for (std::size_t j = 0; j < f.lp_source.size(); ++j) {
    const int src = f.lp_source[j];
    f.c_lp(j) = p.objective.coefficient(src, 1)(0, 0).real();
    for (int i = 0; i < m; ++i) f.a_lp(i, j) = p.constraints[i].lhs.coefficient(src, 1)(0, 0).real();
  }
  int col = static_cast<int>(f.lp_source.size());
  for (int i = 0; i < m; ++i) {
    if (p.constraints[i].relation == Relation::kGreaterEqual) {
      f.a_lp(i, col++) = -1.0;
      f.lp_source.push_back(-1);
    }
  }

  const int n_free = static_cast<int>(f.free_source.size());
  f.a_free = RealMatrix::Zero(m, n_free);
  f.c_free = RealVector::Zero(n_free);
  for (int j = 0; j < n_free; ++j) {
    const int src = f.free_source[j];
    f.c_free(j) = p.objective.coefficient(src, 1)(0, 0).real();
    for (int i = 0; i < m; ++i) f.a_free(i, j) = p.constraints[i].lhs.coefficient(src, 1)(0, 0).real();
  }

  f.degree = n_lp;
  for (const auto& blk : f.psd) f.degree += blk.dim;
  return f;
}

/// A point (or direction) in the embedded space.
struct Point {
  std::vector<RealMatrix> x, s;
  RealVector xl, sl, xf, y;
  double tau = 1.0;
  double kappa = 1.0;
};

inline RealVector apply_a(const RealForm& f, const std::vector<RealMatrix>& x, const RealVector& xl,
                          const RealVector& xf) {
  RealVector r = f.a_lp * xl;
  if (xf.size() > 0) r += f.a_free * xf;
  for (std::size_t b = 0; b < f.psd.size(); ++b) {
    const auto& blk = f.psd[b];
    for (int i = 0; i < f.m; ++i) {
      if (blk.nz[i]) r(i) += inner(blk.a[i], x[b]);
    }
  }
  return r;
}

inline RealMatrix apply_at_block(const PsdBlock& blk, const RealVector& y) {
  RealMatrix r = RealMatrix::Zero(blk.dim, blk.dim);
  for (int i = 0; i < static_cast<int>(blk.a.size()); ++i) {
    if (blk.nz[i] && y(i) != 0.0) r += y(i) * blk.a[i];
  }
  return r;
}

struct Scaling {
  RealMatrix r, rinv, w;
  RealVector lambda;
};

inline std::optional<Scaling> nt_scaling(const RealMatrix& x, const RealMatrix& s) {
  Eigen::LLT<RealMatrix> lx(x), ls(s);
  if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return std::nullopt;
  const RealMatrix lxm = lx.matrixL();
  const RealMatrix lsm = ls.matrixL();
  Eigen::JacobiSVD<RealMatrix> svd(lsm.transpose() * lxm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Scaling sc;
  sc.lambda = svd.singularValues();
  if (!(sc.lambda.minCoeff() > 0.0) || !sc.lambda.allFinite()) return std::nullopt;
  const RealVector isq = sc.lambda.cwiseSqrt().cwiseInverse();
  sc.r = lxm * svd.matrixV() * isq.asDiagonal();
  sc.rinv = isq.asDiagonal() * svd.matrixU().transpose() * lsm.transpose();
  sc.w = sym(sc.r * sc.r.transpose());
  return sc;
}

/// Solves Lambda o Y = T for diagonal Lambda, o the symmetrized product.
inline RealMatrix jordan_solve(const RealVector& lambda, const RealMatrix& t) {
  RealMatrix y(t.rows(), t.cols());
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) y(i, j) = 2.0 * t(i, j) / (lambda(i) + lambda(j));
  }
  return y;
}

/// Largest step keeping Lambda + alpha D positive semidefinite.
inline double max_step_scaled(const RealVector& lambda, const RealMatrix& d) {
  const RealVector isq = lambda.cwiseSqrt().cwiseInverse();
  const RealMatrix m = sym(isq.asDiagonal() * d * isq.asDiagonal());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  const double e = es.eigenvalues()(0);
  return e < 0.0 ? -1.0 / e : std::numeric_limits<double>::infinity();
}

inline double max_step_vec(const RealVector& x, const RealVector& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

inline double max_step_scalar(double x, double dx) {
  return dx < 0.0 ? -x / dx : std::numeric_limits<double>::infinity();
}

class HsdSolver {
 public:
  HsdSolver(const ConicProblem& problem, const SolverOptions& opts)
      : problem_(problem), opts_(opts), form_(to_real_form(problem)) {}

  ConicSolution run(double scale) {
    init(scale);
    ConicSolution best;
    int centering = 0;
    for (int iter = 0; iter < opts_.max_iter; ++iter) {
      ConicSolution cand = recover();
      cand.iterations = iter;
      if (converged(cand)) {
        if (centering >= opts_.max_center_steps || center_distance() <= opts_.center_tol) {
          cand.status = SolveStatus::kOptimal;
          return cand;
        }
        ++centering;
        if (!step(/*centering=*/true)) {
          cand.status = SolveStatus::kOptimal;
          return cand;
        }
        continue;
      }
      if (auto st = infeasibility(cand)) {
        cand.status = *st;
        return cand;
      }
      best = std::move(cand);
      if (!step()) {
        best.status = SolveStatus::kNumericalTrouble;
        return best;
      }
    }
    ConicSolution last = recover();
    last.iterations = opts_.max_iter;
    if (converged(last)) {
      last.status = SolveStatus::kOptimal;
    } else if (auto st = infeasibility(last)) {
      last.status = *st;
    } else {
      last.status = SolveStatus::kMaxIter;
    }
    return last;
  }

 private:
  const ConicProblem& problem_;
  SolverOptions opts_;
  RealForm form_;
  Point pt_;

  int n_lp() const { return static_cast<int>(form_.c_lp.size()); }
  int n_free() const { return static_cast<int>(form_.c_free.size()); }

  void init(double scale) {
    pt_ = Point{};
    for (const auto& blk : form_.psd) {
      pt_.x.push_back(scale * RealMatrix::Identity(blk.dim, blk.dim));
      pt_.s.push_back(scale * RealMatrix::Identity(blk.dim, blk.dim));
    }
    pt_.xl = RealVector::Constant(n_lp(), scale);
    pt_.sl = RealVector::Constant(n_lp(), scale);
    pt_.xf = RealVector::Zero(n_free());
    pt_.y = RealVector::Zero(form_.m);
    pt_.tau = 1.0;
    pt_.kappa = 1.0;
  }

  double cost(const std::vector<RealMatrix>& x, const RealVector& xl, const RealVector& xf) const {
    double v = form_.c_lp.dot(xl) + form_.c_free.dot(xf);
    for (std::size_t b = 0; b < form_.psd.size(); ++b) v += inner(form_.psd[b].c, x[b]);
    return v;
  }

  ConicSolution recover() const {
    ConicSolution sol;
    const double t = pt_.tau;
    sol.tau = pt_.tau;
    sol.kappa = pt_.kappa;
    sol.primal.resize(problem_.blocks.size());
    for (std::size_t b = 0; b < form_.psd.size(); ++b) {
      const auto& blk = form_.psd[b];
      const RealMatrix xb = sym(pt_.x[b]) / t;
      sol.primal[blk.source] = blk.complex ? unembed_hermitian(xb) : ComplexMatrix(xb.cast<Complex>());
    }
    for (std::size_t j = 0; j < form_.lp_source.size(); ++j) {
      const int src = form_.lp_source[j];
      if (src >= 0) sol.primal[src] = ComplexMatrix::Constant(1, 1, Complex(pt_.xl(j) / t, 0.0));
    }
    for (std::size_t j = 0; j < form_.free_source.size(); ++j) {
      sol.primal[form_.free_source[j]] = ComplexMatrix::Constant(1, 1, Complex(pt_.xf(j) / t, 0.0));
    }
    sol.duals = pt_.y / t;
    sol.objective = problem_.objective.evaluate(sol.primal);
    sol.dual_objective = form_.b.dot(sol.duals);
    sol.kkt = kkt_residuals(problem_, sol);
    return sol;
  }

  bool converged(const ConicSolution& s) const {
    if (!(pt_.tau > 0.0)) return false;
    return s.kkt.primal <= opts_.tol && s.kkt.dual <= opts_.tol &&
           std::abs(s.kkt.gap) <= opts_.tol * (1.0 + std::abs(s.objective));
  }

  std::optional<SolveStatus> infeasibility(ConicSolution& s) const {
    const double by = form_.b.dot(pt_.y);
    const double cx = cost(pt_.x, pt_.xl, pt_.xf);
    const bool ratio = pt_.tau <= opts_.infeasibility_ratio * pt_.kappa;

    if (by > 0.0) {
      // Farkas ray: A^T y + s = 0 with s in K and b.y > 0.
      double r = 0.0;
      for (std::size_t b = 0; b < form_.psd.size(); ++b) {
        r = std::max(r, (apply_at_block(form_.psd[b], pt_.y) + pt_.s[b]).norm());
      }
      if (n_lp() > 0) r = std::max(r, (form_.a_lp.transpose() * pt_.y + pt_.sl).cwiseAbs().maxCoeff());
      if (n_free() > 0) r = std::max(r, (form_.a_free.transpose() * pt_.y).cwiseAbs().maxCoeff());
      const double cert = r / by;
      if (cert <= opts_.tol || ratio) {
        s.certificate_residual = cert;
        return SolveStatus::kInfeasible;
      }
    }
    if (cx < 0.0) {
      const RealVector ax = apply_a(form_, pt_.x, pt_.xl, pt_.xf);
      const double cert = ax.cwiseAbs().maxCoeff() / -cx;
      if (cert <= opts_.tol || ratio) {
        s.certificate_residual = cert;
        return SolveStatus::kUnbounded;
      }
    }
    if (ratio) return SolveStatus::kNumericalTrouble;
    return std::nullopt;
  }

  struct Direction {
    std::vector<RealMatrix> dx, ds;
    RealVector dxl, dsl, dxf, dy;
    double dtau = 0.0, dkappa = 0.0;
  };

  // Per-iteration factorization data.
  struct Factor {
    std::vector<Scaling> sc;
    RealVector wl, laml;  // LP scaling and scaled point
    Eigen::PartialPivLU<RealMatrix> lu;
    RealVector dy2, dxf2;
    std::vector<RealMatrix> dx2;
    RealVector dxl2;
    double denom_const = 0.0;  // c.dx2 - b.dy2
    std::vector<RealMatrix> rd;
    RealVector rdl, rdf, rp;
    double rg = 0.0;
  };

  bool factor(Factor& fc) const {
    const int m = form_.m;
    const int nb = static_cast<int>(form_.psd.size());
    fc.sc.clear();
    for (int b = 0; b < nb; ++b) {
      auto sc = nt_scaling(pt_.x[b], pt_.s[b]);
      if (!sc) return false;
      fc.sc.push_back(std::move(*sc));
    }
    fc.wl = (pt_.xl.array() / pt_.sl.array()).sqrt();
    fc.laml = (pt_.xl.array() * pt_.sl.array()).sqrt();

    // Schur complement M_ij = <A_i, W A_j W> summed over cones.
    RealMatrix mm = form_.a_lp * fc.wl.array().square().matrix().asDiagonal() * form_.a_lp.transpose();
    for (int b = 0; b < nb; ++b) {
      const auto& blk = form_.psd[b];
      const RealMatrix& w = fc.sc[b].w;
      std::vector<RealMatrix> waw(m);
      for (int j = 0; j < m; ++j) {
        if (blk.nz[j]) waw[j] = w * blk.a[j] * w;
      }
      for (int i = 0; i < m; ++i) {
        if (!blk.nz[i]) continue;
        for (int j = i; j < m; ++j) {
          if (!blk.nz[j]) continue;
          const double v = inner(blk.a[i], waw[j]);
          mm(i, j) += v;
          if (j != i) mm(j, i) += v;
        }
      }
    }
    const int nf = n_free();
    RealMatrix kk = RealMatrix::Zero(m + nf, m + nf);
    kk.topLeftCorner(m, m) = mm;
    if (nf > 0) {
      kk.topRightCorner(m, nf) = form_.a_free;
      kk.bottomLeftCorner(nf, m) = form_.a_free.transpose();
    }
    fc.lu.compute(kk);

    // Residuals of the current point.
    fc.rp = apply_a(form_, pt_.x, pt_.xl, pt_.xf) - form_.b * pt_.tau;
    fc.rd.resize(nb);
    for (int b = 0; b < nb; ++b) {
      fc.rd[b] = apply_at_block(form_.psd[b], pt_.y) + pt_.s[b] - form_.psd[b].c * pt_.tau;
    }
    fc.rdl = form_.a_lp.transpose() * pt_.y + pt_.sl - form_.c_lp * pt_.tau;
    fc.rdf = form_.a_free.transpose() * pt_.y - form_.c_free * pt_.tau;
    fc.rg = cost(pt_.x, pt_.xl, pt_.xf) - form_.b.dot(pt_.y) + pt_.kappa;

    // Direction associated with a unit dtau.
    std::vector<RealMatrix> wcw(nb);
    for (int b = 0; b < nb; ++b) wcw[b] = fc.sc[b].w * form_.psd[b].c * fc.sc[b].w;
    const RealVector w2 = fc.wl.array().square();
    const RealVector wcl = w2.cwiseProduct(form_.c_lp);
    RealVector rhs(m + nf);
    rhs.head(m) = form_.b + apply_a(form_, wcw, wcl, RealVector::Zero(nf));
    if (nf > 0) rhs.tail(nf) = form_.c_free;
    const RealVector sol = fc.lu.solve(rhs);
    if (!sol.allFinite()) return false;
    fc.dy2 = sol.head(m);
    fc.dxf2 = sol.tail(nf);
    fc.dx2.resize(nb);
    for (int b = 0; b < nb; ++b) {
      const RealMatrix& w = fc.sc[b].w;
      fc.dx2[b] = sym(-wcw[b] + w * apply_at_block(form_.psd[b], fc.dy2) * w);
    }
    fc.dxl2 = -wcl + w2.cwiseProduct(form_.a_lp.transpose() * fc.dy2);
    fc.denom_const = cost(fc.dx2, fc.dxl2, fc.dxf2) - form_.b.dot(fc.dy2);
    return true;
  }

  /// Newton direction for complementarity targets t (scaled space).
  bool direction(const Factor& fc, double eta, const std::vector<RealMatrix>& t_psd, const RealVector& t_lp,
                 double t_tk, Direction& d) const {
    const int m = form_.m;
    const int nb = static_cast<int>(form_.psd.size());
    const int nf = n_free();
    const RealVector w2 = fc.wl.array().square();

    std::vector<RealMatrix> p0(nb);
    for (int b = 0; b < nb; ++b) {
      const auto& sc = fc.sc[b];
      const RealMatrix y = jordan_solve(sc.lambda, t_psd[b]);
      p0[b] = sc.r * y * sc.r.transpose() + eta * sc.w * fc.rd[b] * sc.w;
    }
    const RealVector yl = t_lp.cwiseQuotient(fc.laml);
    const RealVector p0l = fc.wl.cwiseProduct(yl) + eta * w2.cwiseProduct(fc.rdl);

    RealVector rhs(m + nf);
    rhs.head(m) = -eta * fc.rp - apply_a(form_, p0, p0l, RealVector::Zero(nf));
    if (nf > 0) rhs.tail(nf) = -eta * fc.rdf;
    const RealVector sol = fc.lu.solve(rhs);
    if (!sol.allFinite()) return false;
    const RealVector dy1 = sol.head(m);
    const RealVector dxf1 = sol.tail(nf);

    std::vector<RealMatrix> dx1(nb);
    for (int b = 0; b < nb; ++b) {
      const RealMatrix& w = fc.sc[b].w;
      dx1[b] = sym(p0[b] + w * apply_at_block(form_.psd[b], dy1) * w);
    }
    const RealVector dxl1 = p0l + w2.cwiseProduct(form_.a_lp.transpose() * dy1);

    const double num = -eta * fc.rg - cost(dx1, dxl1, dxf1) + form_.b.dot(dy1) - t_tk / pt_.tau;
    const double den = fc.denom_const - pt_.kappa / pt_.tau;
    if (!(std::abs(den) > 0.0)) return false;
    const double dtau = num / den;

    d.dtau = dtau;
    d.dy = dy1 + dtau * fc.dy2;
    d.dxf = dxf1 + dtau * fc.dxf2;
    d.dx.resize(nb);
    d.ds.resize(nb);
    for (int b = 0; b < nb; ++b) {
      d.dx[b] = dx1[b] + dtau * fc.dx2[b];
      d.ds[b] = sym(-eta * fc.rd[b] - apply_at_block(form_.psd[b], d.dy) + dtau * form_.psd[b].c);
    }
    d.dxl = dxl1 + dtau * fc.dxl2;
    d.dsl = -eta * fc.rdl - form_.a_lp.transpose() * d.dy + dtau * form_.c_lp;
    d.dkappa = (t_tk - pt_.kappa * dtau) / pt_.tau;
    return std::isfinite(dtau) && std::isfinite(d.dkappa);
  }

  double max_step(const Factor& fc, const Direction& d) const {
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < form_.psd.size(); ++b) {
      const auto& sc = fc.sc[b];
      a = std::min(a, max_step_scaled(sc.lambda, sc.rinv * d.dx[b] * sc.rinv.transpose()));
      a = std::min(a, max_step_scaled(sc.lambda, sc.r.transpose() * d.ds[b] * sc.r));
    }
    a = std::min(a, max_step_vec(pt_.xl, d.dxl));
    a = std::min(a, max_step_vec(pt_.sl, d.dsl));
    a = std::min(a, max_step_scalar(pt_.tau, d.dtau));
    a = std::min(a, max_step_scalar(pt_.kappa, d.dkappa));
    return a;
  }

  double mu() const {
    double gap = pt_.tau * pt_.kappa + pt_.xl.dot(pt_.sl);
    for (std::size_t b = 0; b < form_.psd.size(); ++b) gap += inner(pt_.x[b], pt_.s[b]);
    return gap / (form_.degree + 1);
  }

  /// ||XS - mu I|| measured on the eigenvalues of X^(1/2) S X^(1/2), over mu.
  double center_distance() const {
    const double m = mu();
    double d2 = std::pow(pt_.tau * pt_.kappa - m, 2);
    d2 += (pt_.xl.cwiseProduct(pt_.sl).array() - m).square().sum();
    for (std::size_t b = 0; b < form_.psd.size(); ++b) {
      Eigen::LLT<RealMatrix> lx(pt_.x[b]);
      if (lx.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      const RealMatrix l = lx.matrixL();
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(l.transpose() * pt_.s[b] * l), Eigen::EigenvaluesOnly);
      d2 += (es.eigenvalues().array() - m).square().sum();
    }
    return std::sqrt(d2) / m;
  }

  bool step(bool centering = false) {
    Factor fc;
    if (!factor(fc)) return false;
    const int nb = static_cast<int>(form_.psd.size());
    const double mu = this->mu();

    if (centering) {
      // Pure Newton centering at fixed mu; residuals are left as they are.
      std::vector<RealMatrix> t_psd(nb);
      for (int b = 0; b < nb; ++b) {
        const auto& lam = fc.sc[b].lambda;
        t_psd[b] = RealMatrix((mu - lam.array().square()).matrix().asDiagonal());
      }
      const RealVector t_lp = (mu - fc.laml.array().square()).matrix();
      Direction d;
      if (!direction(fc, 0.0, t_psd, t_lp, mu - pt_.tau * pt_.kappa, d)) return false;
      const double amax = max_step(fc, d);
      apply(d, amax > 1.0 / opts_.step_fraction ? 1.0 : opts_.step_fraction * amax);
      return pt_.tau > 0.0 && pt_.kappa > 0.0;
    }

    // Predictor.
    std::vector<RealMatrix> t_psd(nb);
    for (int b = 0; b < nb; ++b) t_psd[b] = -RealMatrix(fc.sc[b].lambda.array().square().matrix().asDiagonal());
    RealVector t_lp = -fc.laml.array().square().matrix();
    Direction aff;
    if (!direction(fc, 1.0, t_psd, t_lp, -pt_.tau * pt_.kappa, aff)) return false;
    const double a_aff = std::min(1.0, max_step(fc, aff));
    const double sigma = std::clamp(std::pow(1.0 - a_aff, 3), 0.0, 1.0);

    // Corrector with second-order terms.
    for (int b = 0; b < nb; ++b) {
      const auto& sc = fc.sc[b];
      const RealMatrix dxs = sc.rinv * aff.dx[b] * sc.rinv.transpose();
      const RealMatrix dss = sc.r.transpose() * aff.ds[b] * sc.r;
      t_psd[b] = sigma * mu * RealMatrix::Identity(sc.lambda.size(), sc.lambda.size()) -
                 RealMatrix(sc.lambda.array().square().matrix().asDiagonal()) - sym(dxs * dss);
    }
    t_lp = (sigma * mu - fc.laml.array().square() - aff.dxl.array() * aff.dsl.array()).matrix();
    const double t_tk = sigma * mu - pt_.tau * pt_.kappa - aff.dtau * aff.dkappa;
    Direction d;
    if (!direction(fc, 1.0 - sigma, t_psd, t_lp, t_tk, d)) return false;
    const double alpha = std::min(1.0, opts_.step_fraction * max_step(fc, d));
    if (!(alpha > 1e-12)) return false;
    apply(d, alpha);
    return pt_.tau > 0.0 && pt_.kappa > 0.0;
  }

  void apply(const Direction& d, double alpha) {
    const int nb = static_cast<int>(form_.psd.size());
    for (int b = 0; b < nb; ++b) {
      pt_.x[b] = sym(pt_.x[b] + alpha * d.dx[b]);
      pt_.s[b] = sym(pt_.s[b] + alpha * d.ds[b]);
    }
    pt_.xl += alpha * d.dxl;
    pt_.sl += alpha * d.dsl;
    pt_.xf += alpha * d.dxf;
    pt_.y += alpha * d.dy;
    pt_.tau += alpha * d.dtau;
    pt_.kappa += alpha * d.dkappa;
  }
};

}  // namespace detail

/// Solves `problem`. Never throws on numerical failure; the status says what
/// happened. Throws ContractViolation for malformed problems or tol outside
/// [1e-12, 1e-4].
inline ConicSolution solve(const ConicProblem& problem, const SolverOptions& opts) {
  problem.validate();
  if (!(opts.tol >= 1e-12 && opts.tol <= 1e-4)) {
    throw ContractViolation("sdp::solve: tol must lie in [1e-12, 1e-4]");
  }
  detail::HsdSolver solver(problem, opts);
  ConicSolution sol = solver.run(opts.initial_scale);
  if (sol.status == SolveStatus::kNumericalTrouble) {
    ConicSolution retry = solver.run(100.0 * opts.initial_scale);
    retry.restarts = 1;
    retry.iterations += sol.iterations;
    return retry;
  }
  return sol;
}

inline ConicSolution solve(const ConicProblem& problem, double tol = 1e-8, int max_iter = 100) {
  SolverOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return solve(problem, opts);
}

}  // namespace fdswipt::sdp
