#pragma once

// Joint beamforming and power splitting through semidefinite relaxation.
//
// Per user k the relaxed program carries
//   Z_k      Hermitian PSD, N_t x N_t      (Z_k = v_k v_k^H)
//   S_k      [[t_k, delta], [delta, rho_k]] >= 0      t_k >= delta^2 / rho_k
//   H_k      [[u_k, sqrt(Q)], [sqrt(Q), 1 - rho_k]] >= 0      u_k >= Q / (1 - rho_k)
// and minimizes sum_k tr Z_k subject to
//   (1/gamma) h_k^H Z_k h_k - sum_{j != k} h_k^H Z_j h_k - t_k >= G_bar_k + sigma^2
//   sum_j h_k^H Z_j h_k - u_k >= -G_tilde_k - sigma^2.
// The 1 - rho_k entry of H_k is its own variable tied to rho_k by an equality.

#include <cmath>
#include <string>
#include <vector>

#include "fdswipt/linalg.hpp"
#include "fdswipt/sdp/kkt.hpp"
#include "fdswipt/sdp/solver.hpp"
#include "fdswipt/system_model.hpp"

namespace fdswipt::downlink {

using model::ChannelRealization;
using model::RobustBounds;
using model::SystemParams;

inline constexpr double kRhoMargin = 1e-9;
inline constexpr double kRankWarning = 1e-5;

/// Block and row indices of the relaxed program.
struct SdrLayout {
  int num_users = 0;
  double power_scale = 1.0;  // every power in the program is divided by this

  int z_block(int k) const { return 3 * k; }
  int s_block(int k) const { return 3 * k + 1; }
  int h_block(int k) const { return 3 * k + 2; }
  int sinr_row(int k) const { return k; }
  int harvest_row(int k) const { return num_users + k; }
};

struct Sdr {
  sdp::ConicProblem problem;
  SdrLayout layout;
};

/// Default normalization: the largest right-hand side power of the program.
inline double default_power_scale(const SystemParams& p, const RobustBounds& b) {
  double s = p.q_bar;
  for (std::size_t k = 0; k < b.g_bar.size(); ++k) {
    s = std::max(s, b.g_bar[k] + p.sigma2_ms + p.delta2_ms);
  }
  return s;
}

inline Sdr build_sdr_scaled(const SystemParams& params, const ChannelRealization& ch,
                            const RobustBounds& bounds, double power_scale) {
  using namespace sdp;
  const int k_users = params.num_users;
  const int nt = params.num_tx;
  if (k_users < 1 || nt < 1) throw ContractViolation("build_sdr: need K >= 1 and N_t >= 1");
  if (static_cast<int>(ch.h_dl.size()) != k_users || static_cast<int>(bounds.g_bar.size()) != k_users) {
    throw ContractViolation("build_sdr: channel/bounds sized for a different K");
  }
  if (!(power_scale > 0)) throw ContractViolation("build_sdr: power_scale must be positive");

  const double s = power_scale;
  const double sigma2 = params.sigma2_ms / s;
  const double delta = std::sqrt(params.delta2_ms / s);
  const double sqrt_q = std::sqrt(params.q_bar / s);
  const double gamma = params.gamma_dl;

  Sdr out;
  out.layout.num_users = k_users;
  out.layout.power_scale = s;
  ConicProblem& p = out.problem;
  for (int k = 0; k < k_users; ++k) {
    p.add_block(hermitian_psd(nt));
    p.add_block(real_2x2_psd());
    p.add_block(real_2x2_psd());
    p.objective.add(out.layout.z_block(k), ComplexMatrix::Identity(nt, nt));
  }

  std::vector<ComplexMatrix> hh(k_users);
  for (int k = 0; k < k_users; ++k) {
    if (ch.h_dl[k].size() != nt) throw ContractViolation("build_sdr: h_dl length differs from N_t");
    hh[k] = linalg::outer(ch.h_dl[k]);
  }

  for (int k = 0; k < k_users; ++k) {
    LinearFunctional f;
    for (int j = 0; j < k_users; ++j) {
      f.add(out.layout.z_block(j), j == k ? ComplexMatrix(hh[k] / gamma) : ComplexMatrix(-hh[k]));
    }
    f.add_entry(out.layout.s_block(k), 2, 0, 0, -1.0);
    p.add_constraint(f, Relation::kGreaterEqual, bounds.g_bar[k] / s + sigma2);
  }
  for (int k = 0; k < k_users; ++k) {
    LinearFunctional f;
    for (int j = 0; j < k_users; ++j) f.add(out.layout.z_block(j), hh[k]);
    f.add_entry(out.layout.h_block(k), 2, 0, 0, -1.0);
    p.add_constraint(f, Relation::kGreaterEqual, -bounds.g_tilde[k] / s - sigma2);
  }

  for (int k = 0; k < k_users; ++k) {
    const int sb = out.layout.s_block(k);
    const int hb = out.layout.h_block(k);
    LinearFunctional off_s, off_h, link, lo_s, lo_h;
    off_s.add_entry(sb, 2, 0, 1, 1.0);
    off_h.add_entry(hb, 2, 0, 1, 1.0);
    link.add_entry(sb, 2, 1, 1, 1.0).add_entry(hb, 2, 1, 1, 1.0);
    lo_s.add_entry(sb, 2, 1, 1, 1.0);
    lo_h.add_entry(hb, 2, 1, 1, 1.0);
    p.add_constraint(off_s, Relation::kEqual, delta);
    p.add_constraint(off_h, Relation::kEqual, sqrt_q);
    p.add_constraint(link, Relation::kEqual, 1.0);
    p.add_constraint(lo_s, Relation::kGreaterEqual, kRhoMargin);
    p.add_constraint(lo_h, Relation::kGreaterEqual, kRhoMargin);
  }
  return out;
}

/// The relaxed program in watts.
inline sdp::ConicProblem build_sdr(const SystemParams& params, const ChannelRealization& ch,
                                   const RobustBounds& bounds) {
  return build_sdr_scaled(params, ch, bounds, 1.0).problem;
}

struct UserCertificate {
  double rank_ratio = 0.0;     // lambda_2 / lambda_1 of Z_k
  double sinr_slack = 0.0;     // achieved SINR / gamma - 1
  double harvest_slack = 0.0;  // harvested power / Q - 1
  double cert_min_eig = 0.0;   // min eig of A*_k
  double cert_norm = 0.0;      // ||A*_k||_2
  double cert_compl_norm = 0.0;  // ||A*_k Z_k||_F
  double trace_z = 0.0;
  bool cap_violation = false;  // tr Z_k > P_max
};

struct DownlinkSolution {
  sdp::SolveStatus status = sdp::SolveStatus::kNumericalTrouble;
  std::vector<ComplexVector> v;
  std::vector<double> rho;
  std::vector<ComplexMatrix> z;
  std::vector<double> lambda;  // SINR multipliers
  std::vector<double> mu;      // harvesting multipliers
  std::vector<double> sdp_rho;  // rho as returned by the conic solver
  bool polished = false;        // (power, rho) refined with both constraints tight
  double objective = 0.0;        // sum_k ||v_k||^2
  double conic_objective = 0.0;  // sum_k tr Z_k
  std::vector<UserCertificate> certificates;
  bool rank_deficient = false;
  bool cap_violation = false;
  int iterations = 0;
  sdp::KktResiduals kkt;

  bool optimal() const { return status == sdp::SolveStatus::kOptimal; }
};

/// Received powers |h_k^H v_j|^2 indexed [k][j].
inline std::vector<std::vector<double>> gains(const ChannelRealization& ch, const std::vector<ComplexVector>& v) {
  const std::size_t k_users = v.size();
  std::vector<std::vector<double>> g(k_users, std::vector<double>(k_users));
  for (std::size_t k = 0; k < k_users; ++k) {
    for (std::size_t j = 0; j < k_users; ++j) g[k][j] = std::norm(ch.h_dl[k].dot(v[j]));
  }
  return g;
}

/// Same as gains() but from covariance matrices: h_k^H Z_j h_k.
inline std::vector<std::vector<double>> gains(const ChannelRealization& ch, const std::vector<ComplexMatrix>& z) {
  const std::size_t k_users = z.size();
  std::vector<std::vector<double>> g(k_users, std::vector<double>(k_users));
  for (std::size_t k = 0; k < k_users; ++k) {
    for (std::size_t j = 0; j < k_users; ++j) {
      g[k][j] = (ch.h_dl[k].adjoint() * z[j] * ch.h_dl[k])(0, 0).real();
    }
  }
  return g;
}

/// Worst-case downlink SINR of user k.
inline double achieved_sinr(const SystemParams& p, const RobustBounds& b, const std::vector<std::vector<double>>& g,
                            const std::vector<double>& rho, std::size_t k) {
  double interf = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j != k) interf += g[k][j];
  }
  return rho[k] * g[k][k] / (rho[k] * (interf + b.g_bar[k] + p.sigma2_ms) + p.delta2_ms);
}

/// Worst-case harvested power of user k.
inline double harvested_power(const SystemParams& p, const RobustBounds& b, const std::vector<std::vector<double>>& g,
                              const std::vector<double>& rho, std::size_t k) {
  double total = 0.0;
  for (double x : g[k]) total += x;
  return p.eta * (1.0 - rho[k]) * (total + b.g_tilde[k] + p.sigma2_ms);
}

/// A*_k = I + sum_j (lambda_j - mu_j) h_j h_j^H - (lambda_k / gamma + lambda_k) h_k h_k^H.
inline ComplexMatrix certificate_matrix(const SystemParams& p, const ChannelRealization& ch,
                                        const std::vector<double>& lambda, const std::vector<double>& mu, int k) {
  const int nt = static_cast<int>(ch.h_dl[k].size());
  ComplexMatrix a = ComplexMatrix::Identity(nt, nt);
  for (std::size_t j = 0; j < lambda.size(); ++j) a += (lambda[j] - mu[j]) * linalg::outer(ch.h_dl[j]);
  a -= (lambda[k] / p.gamma_dl + lambda[k]) * linalg::outer(ch.h_dl[k]);
  return a;
}

/// Fills sol.certificates from sol.z, sol.v, sol.rho and the multipliers.
inline void certify(DownlinkSolution& sol, const SystemParams& p, const ChannelRealization& ch,
                    const RobustBounds& b) {
  const int k_users = static_cast<int>(sol.z.size());
  const auto g = gains(ch, sol.v);
  sol.certificates.assign(k_users, {});
  sol.rank_deficient = false;
  sol.cap_violation = false;
  for (int k = 0; k < k_users; ++k) {
    auto& c = sol.certificates[k];
    const auto eig = linalg::hermitian_eig(sol.z[k]);
    c.rank_ratio = eig.eigenvalues.size() > 1 ? std::max(0.0, eig.eigenvalues(1)) / eig.eigenvalues(0) : 0.0;
    c.trace_z = sol.z[k].trace().real();
    c.sinr_slack = achieved_sinr(p, b, g, sol.rho, k) / p.gamma_dl - 1.0;
    c.harvest_slack = harvested_power(p, b, g, sol.rho, k) / p.q_bar - 1.0;
    const ComplexMatrix a = certificate_matrix(p, ch, sol.lambda, sol.mu, k);
    const auto ae = linalg::hermitian_eig(a);
    c.cert_min_eig = ae.eigenvalues(ae.eigenvalues.size() - 1);
    c.cert_norm = std::max(std::abs(ae.eigenvalues(0)), std::abs(c.cert_min_eig));
    c.cert_compl_norm = (a * sol.z[k]).norm();
    c.cap_violation = c.trace_z > p.p_max;
    sol.rank_deficient = sol.rank_deficient || c.rank_ratio > kRankWarning;
    sol.cap_violation = sol.cap_violation || c.cap_violation;
  }
}

/// Rank-one extraction: sqrt(lambda_1) times the top eigenvector, phased so
/// that h_k^H v_k is real and nonnegative.
inline ComplexVector extract_beamformer(const ComplexMatrix& z, const ComplexVector& h) {
  const auto eig = linalg::hermitian_eig(z);
  ComplexVector v = std::sqrt(std::max(0.0, eig.eigenvalues(0))) * eig.eigenvectors.col(0);
  const Complex hv = h.dot(v);
  if (std::abs(hv) > 0) v *= std::conj(hv) / std::abs(hv);
  return v;
}

/// Holds the beam directions fixed and solves for powers p_k and ratios
/// rho_k with every SINR and harvesting constraint at equality (Newton).
/// Returns false, leaving v and rho untouched, if the iteration fails.
inline bool polish_powers(const SystemParams& prm, const ChannelRealization& ch, const RobustBounds& b,
                          std::vector<ComplexVector>& v, std::vector<double>& rho) {
  const int k_users = static_cast<int>(v.size());
  const int n = 2 * k_users;
  std::vector<ComplexVector> dir(k_users);
  RealVector x(n);
  for (int k = 0; k < k_users; ++k) {
    const double pk = v[k].squaredNorm();
    if (!(pk > 0)) return false;
    dir[k] = v[k] / std::sqrt(pk);
    x(k) = pk;
    x(k_users + k) = rho[k];
  }
  const auto a = gains(ch, dir);
  const double g = prm.gamma_dl;
  const double s2 = prm.sigma2_ms, d2 = prm.delta2_ms, q = prm.q_bar;

  auto residual = [&](const RealVector& y) {
    RealVector f(n);
    for (int k = 0; k < k_users; ++k) {
      const double r = y(k_users + k);
      double interf = 0.0, total = 0.0;
      for (int j = 0; j < k_users; ++j) {
        total += y(j) * a[k][j];
        if (j != k) interf += y(j) * a[k][j];
      }
      f(k) = (y(k) * a[k][k] / g - interf - b.g_bar[k] - s2 - d2 / r) / (b.g_bar[k] + s2 + d2);
      f(k_users + k) = (total + b.g_tilde[k] + s2 - q / (1.0 - r)) / q;
    }
    return f;
  };
  auto inside = [&](const RealVector& y) {
    for (int k = 0; k < k_users; ++k) {
      if (!(y(k) > 0) || !(y(k_users + k) > 0) || !(y(k_users + k) < 1)) return false;
    }
    return true;
  };

  RealVector f = residual(x);
  for (int it = 0; it < 50 && f.cwiseAbs().maxCoeff() > 1e-14; ++it) {
    RealMatrix jac = RealMatrix::Zero(n, n);
    for (int k = 0; k < k_users; ++k) {
      const double r = x(k_users + k);
      const double ns = b.g_bar[k] + s2 + d2;
      for (int j = 0; j < k_users; ++j) {
        jac(k, j) = (j == k ? a[k][k] / g : -a[k][j]) / ns;
        jac(k_users + k, j) = a[k][j] / q;
      }
      jac(k, k_users + k) = d2 / (r * r) / ns;
      jac(k_users + k, k_users + k) = -1.0 / ((1.0 - r) * (1.0 - r));
    }
    const RealVector dx = jac.fullPivLu().solve(-f);
    if (!dx.allFinite()) return false;
    double t = 1.0;
    while (t > 1e-6 && !inside(x + t * dx)) t *= 0.5;
    if (!inside(x + t * dx)) return false;
    x += t * dx;
    f = residual(x);
  }
  if (!(f.cwiseAbs().maxCoeff() <= 1e-12)) return false;
  for (int k = 0; k < k_users; ++k) {
    v[k] = std::sqrt(x(k)) * dir[k];
    rho[k] = x(k_users + k);
  }
  return true;
}

inline DownlinkSolution solve_downlink(const SystemParams& params, const ChannelRealization& ch,
                                       const RobustBounds& bounds, double tol = 1e-10) {
  params.validate();
  const Sdr sdr = build_sdr_scaled(params, ch, bounds, default_power_scale(params, bounds));
  const auto cs = sdp::solve(sdr.problem, tol);

  DownlinkSolution sol;
  sol.status = cs.status;
  sol.iterations = cs.iterations;
  sol.kkt = cs.kkt;
  if (!sol.optimal()) return sol;

  const int k_users = params.num_users;
  const double s = sdr.layout.power_scale;
  for (int k = 0; k < k_users; ++k) {
    const ComplexMatrix z = s * cs.primal[sdr.layout.z_block(k)];
    sol.z.push_back(0.5 * (z + z.adjoint()));
    sol.sdp_rho.push_back(cs.primal[sdr.layout.s_block(k)](1, 1).real());
    sol.lambda.push_back(cs.duals(sdr.layout.sinr_row(k)));
    sol.mu.push_back(cs.duals(sdr.layout.harvest_row(k)));
    sol.v.push_back(extract_beamformer(sol.z[k], ch.h_dl[k]));
    sol.conic_objective += sol.z[k].trace().real();
  }
  sol.rho = sol.sdp_rho;
  sol.polished = polish_powers(params, ch, bounds, sol.v, sol.rho);
  for (const auto& v : sol.v) sol.objective += v.squaredNorm();
  certify(sol, params, ch, bounds);
  return sol;
}

}  // namespace fdswipt::downlink
