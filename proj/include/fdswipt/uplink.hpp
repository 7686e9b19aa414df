#pragma once

// Uplink power control with Wiener receive filters.
//
// For fixed filters w_k the smallest powers meeting every SINR target with
// equality solve the K x K system
//   p_k |w_k^H h_k|^2 = gamma (sum_{j != k} p_j |w_k^H h_j|^2 + N ||w_k||^2),
// N = E_bar + sigma2_bs. uplink_solve alternates that solve with the Wiener
// filter of the current powers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fdswipt/errors.hpp"
#include "fdswipt/linalg.hpp"
#include "fdswipt/system_model.hpp"

namespace fdswipt::uplink {

using model::ChannelRealization;
using model::RobustBounds;
using model::SystemParams;

/// Noise level used inside the Wiener filter.
enum class FilterNoise {
  kWorstCase,        // sigma2_bs + E_bar, the level the SINR constraint uses
  kBeamformerPower,  // sigma2_bs + sum_j ||v_j||^2
};

struct UplinkOptions {
  int max_iter = 50;
  double rel_tol = 1e-8;
  FilterNoise filter_noise = FilterNoise::kWorstCase;
  double downlink_power = 0.0;  // sum_j ||v_j||^2, read by kBeamformerPower
};

struct UplinkSolution {
  std::vector<ComplexVector> w;
  std::vector<double> p_up;
  std::vector<double> sinr;
  std::vector<double> history;  // total power after each power update
  int iterations = 0;
  bool converged = false;
  double total = 0.0;
};

/// w_k = (sum_j p_j h_j h_j^H + noise I)^-1 sqrt(p_k) h_k.
inline std::vector<ComplexVector> wiener_filter(const ChannelRealization& ch, const std::vector<double>& p_up,
                                                double noise_plus_si) {
  const std::size_t k_users = ch.h_ul.size();
  if (p_up.size() != k_users) throw ContractViolation("wiener_filter: one power per user expected");
  if (!(noise_plus_si > 0)) throw ContractViolation("wiener_filter: noise_plus_si must be positive");
  const Eigen::Index nr = ch.h_ul[0].size();
  ComplexMatrix r = noise_plus_si * ComplexMatrix::Identity(nr, nr);
  for (std::size_t j = 0; j < k_users; ++j) {
    if (!(p_up[j] > 0)) throw ContractViolation("wiener_filter: powers must be positive");
    r += p_up[j] * linalg::outer(ch.h_ul[j]);
  }
  std::vector<ComplexVector> w(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    w[k] = linalg::solve_hermitian_pd(r, std::sqrt(p_up[k]) * ch.h_ul[k]);
  }
  return w;
}

/// Uplink SINR of every user with worst-case SI at the BS.
inline std::vector<double> uplink_sinr(const ChannelRealization& ch, const std::vector<ComplexVector>& w,
                                       const std::vector<double>& p_up, double e_bar, double sigma2_bs) {
  const std::size_t k_users = w.size();
  std::vector<double> s(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    double den = (e_bar + sigma2_bs) * w[k].squaredNorm();
    for (std::size_t j = 0; j < k_users; ++j) {
      if (j != k) den += p_up[j] * std::norm(w[k].dot(ch.h_ul[j]));
    }
    s[k] = p_up[k] * std::norm(w[k].dot(ch.h_ul[k])) / den;
  }
  return s;
}

/// Smallest powers giving every user SINR exactly gamma_ul with filters w.
/// Throws InfeasibleUplink if no positive solution exists or one exceeds cap.
inline std::vector<double> min_uplink_power(const ChannelRealization& ch, const std::vector<ComplexVector>& w,
                                            double e_bar, double sigma2_bs, double gamma_ul,
                                            double cap = std::numeric_limits<double>::infinity()) {
  const int k_users = static_cast<int>(w.size());
  RealMatrix m = RealMatrix::Identity(k_users, k_users);
  RealVector rhs(k_users);
  for (int k = 0; k < k_users; ++k) {
    const double own = std::norm(w[k].dot(ch.h_ul[k]));
    if (!(own > 0)) throw InfeasibleUplink("min_uplink_power: filter of user " + std::to_string(k) + " is blind");
    for (int j = 0; j < k_users; ++j) {
      if (j != k) m(k, j) = -gamma_ul * std::norm(w[k].dot(ch.h_ul[j])) / own;
    }
    rhs(k) = gamma_ul * (e_bar + sigma2_bs) * w[k].squaredNorm() / own;
  }
  // I - gamma F with F >= 0 has a nonnegative inverse iff its spectral
  // radius is below one, which the sign of the solution reveals.
  const RealVector p = m.partialPivLu().solve(rhs);
  std::vector<double> out(k_users);
  for (int k = 0; k < k_users; ++k) {
    if (!std::isfinite(p(k)) || !(p(k) > 0)) {
      throw InfeasibleUplink("min_uplink_power: SINR target unreachable with these filters");
    }
    if (p(k) > cap) {
      throw InfeasibleUplink("min_uplink_power: user " + std::to_string(k) + " needs " + std::to_string(p(k)) +
                             " W, above the cap " + std::to_string(cap) + " W");
    }
    out[k] = p(k);
  }
  return out;
}

inline UplinkSolution uplink_solve(const SystemParams& params, const ChannelRealization& ch, const RobustBounds& b,
                                   const UplinkOptions& opt = {}) {
  params.validate();
  const int k_users = params.num_users;
  const double cap = std::min(params.q_bar, params.p_max);
  const double filter_noise = params.sigma2_bs + (opt.filter_noise == FilterNoise::kWorstCase
                                                      ? b.e_bar
                                                      : opt.downlink_power);

  UplinkSolution sol;
  sol.p_up.assign(k_users, cap / 2);
  for (int it = 1; it <= opt.max_iter; ++it) {
    sol.w = wiener_filter(ch, sol.p_up, filter_noise);
    const auto next = min_uplink_power(ch, sol.w, b.e_bar, params.sigma2_bs, params.gamma_ul);
    double change = 0.0;
    for (int k = 0; k < k_users; ++k) change = std::max(change, std::abs(next[k] - sol.p_up[k]) / next[k]);
    sol.p_up = next;
    sol.iterations = it;
    double total = 0.0;
    for (double p : sol.p_up) total += p;
    sol.history.push_back(total);
    if (change <= opt.rel_tol) {
      sol.converged = true;
      break;
    }
  }
  for (int k = 0; k < k_users; ++k) {
    if (sol.p_up[k] > cap) {
      throw InfeasibleUplink("uplink_solve: user " + std::to_string(k) + " needs " + std::to_string(sol.p_up[k]) +
                             " W, above min(Q, P_max) = " + std::to_string(cap) + " W");
    }
  }
  sol.sinr = uplink_sinr(ch, sol.w, sol.p_up, b.e_bar, params.sigma2_bs);
  sol.total = sol.history.empty() ? 0.0 : sol.history.back();
  return sol;
}

}  // namespace fdswipt::uplink
