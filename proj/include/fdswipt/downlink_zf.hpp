#pragma once

// Zero-forcing baseline. Each beamformer lives in the null space of the
// other users' channels, so the per-user problems decouple into a scalar
// quadratic for rho_k and a closed-form power.

#include <cmath>
#include <string>
#include <vector>

#include "fdswipt/linalg.hpp"
#include "fdswipt/system_model.hpp"

namespace fdswipt::zf {

using model::ChannelRealization;
using model::RobustBounds;
using model::SystemParams;

inline constexpr double kDegenerateThreshold = 1e-12;

/// alpha rho^2 - beta rho - c = 0 and its root in (0, 1).
struct RhoQuadratic {
  double rho = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double c = 0.0;
};

/// SINR and harvesting both tight:
///   tau = gamma (G_bar + sigma^2 + delta^2 / rho)
///   (1 - rho)(tau + G_tilde + sigma^2) = Q
/// which rearranges to alpha rho^2 - beta rho - gamma delta^2 = 0.
inline RhoQuadratic zf_rho(const SystemParams& p, const RobustBounds& b, int k) {
  if (!(p.gamma_dl > 0 && p.delta2_ms > 0 && p.q_bar > 0)) {
    throw ContractViolation("zf_rho: gamma_dl, delta2_ms and q_bar must be positive");
  }
  RhoQuadratic q;
  q.alpha = p.gamma_dl * (b.g_bar[k] + p.sigma2_ms) + b.g_tilde[k] + p.sigma2_ms;
  q.c = p.gamma_dl * p.delta2_ms;
  q.beta = q.alpha - p.q_bar - q.c;
  const double disc = std::sqrt(q.beta * q.beta + 4.0 * q.alpha * q.c);
  // Both forms are the positive root; pick the one without cancellation.
  q.rho = q.beta >= 0 ? (q.beta + disc) / (2.0 * q.alpha) : 2.0 * q.c / (disc - q.beta);
  return q;
}

/// Received power user k needs at its antenna for the SINR target.
inline double required_power(const SystemParams& p, const RobustBounds& b, int k, double rho) {
  return p.gamma_dl * (b.g_bar[k] + p.sigma2_ms + p.delta2_ms / rho);
}

/// Channel of user k projected onto the null space of the others.
inline ComplexVector projected_channel(const ChannelRealization& ch, int k) {
  const int k_users = static_cast<int>(ch.h_dl.size());
  const Eigen::Index nt = ch.h_dl[k].size();
  ComplexMatrix others(nt, k_users - 1);
  for (int j = 0, c = 0; j < k_users; ++j) {
    if (j != k) others.col(c++) = ch.h_dl[j];
  }
  const ComplexMatrix u = linalg::null_space_basis(others);
  return u * (u.adjoint() * ch.h_dl[k]);
}

/// v_k = sqrt(tau_k) P h_k / ||P h_k||^2, so that h_k^H v_k = sqrt(tau_k).
inline ComplexVector zf_beamformer(const SystemParams& p, const ChannelRealization& ch, const RobustBounds& b,
                                   int k, double rho) {
  if (p.num_tx < p.num_users) throw ContractViolation("zf_beamformer: zero forcing needs N_t >= K");
  const ComplexVector ph = projected_channel(ch, k);
  const double n2 = ph.squaredNorm();
  if (!(std::sqrt(n2) >= kDegenerateThreshold * ch.h_dl[k].norm())) {
    throw DegenerateChannel("zf_beamformer: user " + std::to_string(k) +
                            " channel lies in the span of the other users");
  }
  return std::sqrt(required_power(p, b, k, rho)) * ph / n2;
}

struct ZfUser {
  ComplexVector v;
  double rho = 0.0;
  double p = 0.0;    // ||v_k||^2
  double tau = 0.0;  // required received power
  RhoQuadratic quad;
  bool degenerate = false;
  bool cap_violation = false;  // p > P_max
};

struct ZfSolution {
  std::vector<ZfUser> users;
  double objective = 0.0;
  bool feasible = false;  // false if any user is degenerate
  bool cap_violation = false;
};

inline ZfSolution zf_solve(const SystemParams& p, const ChannelRealization& ch, const RobustBounds& b) {
  p.validate();
  if (p.num_tx < p.num_users) throw ContractViolation("zf_solve: zero forcing needs N_t >= K");
  ZfSolution sol;
  sol.feasible = true;
  for (int k = 0; k < p.num_users; ++k) {
    ZfUser u;
    u.quad = zf_rho(p, b, k);
    u.rho = u.quad.rho;
    u.tau = required_power(p, b, k, u.rho);
    try {
      u.v = zf_beamformer(p, ch, b, k, u.rho);
      u.p = u.v.squaredNorm();
      u.cap_violation = u.p > p.p_max;
      sol.objective += u.p;
    } catch (const DegenerateChannel&) {
      u.degenerate = true;
      sol.feasible = false;
    }
    sol.cap_violation = sol.cap_violation || u.cap_violation;
    sol.users.push_back(std::move(u));
  }
  if (!sol.feasible) sol.objective = 0.0;
  return sol;
}

}  // namespace fdswipt::zf
