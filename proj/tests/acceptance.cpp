// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Oracles here are written out from the model equations and
// do not call the library's own constraint evaluators.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdswipt/downlink_jbps.hpp"
#include "fdswipt/downlink_zf.hpp"
#include "fdswipt/harness.hpp"
#include "fdswipt/sdp/kkt.hpp"
#include "fdswipt/sdp/solver.hpp"
#include "fdswipt/uplink.hpp"

#ifndef FDSWIPT_CONFIG_DIR
#define FDSWIPT_CONFIG_DIR "configs"
#endif

namespace {

using namespace fdswipt;
using model::ChannelRealization;
using model::RobustBounds;
using model::SystemParams;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %-28s %s  %s\n", id, name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Instance {
  SystemParams p;
  ChannelRealization ch;
  RobustBounds b;
};

Instance draw(const SystemParams& p, std::uint64_t trial, std::uint64_t seed) {
  Instance in{p, model::sample_channels(p, trial, seed), {}};
  in.b = model::compute_bounds(p, in.ch);
  return in;
}

// Worst-case SINR and harvested power straight from the signal model.
double oracle_sinr(const Instance& in, const std::vector<ComplexVector>& v, const std::vector<double>& rho, int k) {
  const ComplexVector& h = in.ch.h_dl[k];
  const double sig = std::norm(h.dot(v[k]));
  double mui = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (static_cast<int>(j) != k) mui += std::norm(h.dot(v[j]));
  }
  return rho[k] * sig / (rho[k] * (mui + in.b.g_bar[k] + in.p.sigma2_ms) + in.p.delta2_ms);
}

double oracle_harvest(const Instance& in, const std::vector<ComplexVector>& v, const std::vector<double>& rho, int k) {
  double rx = 0.0;
  for (const auto& x : v) rx += std::norm(in.ch.h_dl[k].dot(x));
  return (1.0 - rho[k]) * (rx + in.b.g_tilde[k] + in.p.sigma2_ms);
}

Eigen::VectorXd eigvals(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

// ---------------------------------------------------------------- 1, 2, 3

void downlink_corpus() {
  const SystemParams p;  // N_t = 4, K = 2, gamma_dl = -20 dB, Q = 20 dBm
  const int n = 200;
  int users = 0, rank_ok = 0, solved = 0;
  double worst_slack = 0.0, worst_raw = 0.0, worst_obj_change = 0.0;
  int psd_ok = 0, compl_ok = 0, mult_ok = 0, implied_tiny = 0;
  std::vector<std::string> rank_exceptions, mult_exceptions;
  const auto t0 = Clock::now();

  for (int t = 0; t < n; ++t) {
    const auto in = draw(p, t, 2024);
    const auto sol = downlink::solve_downlink(p, in.ch, in.b);
    if (!sol.optimal()) {
      rank_exceptions.push_back("trial " + std::to_string(t) + ": status " + sdp::to_string(sol.status));
      users += p.num_users;
      continue;
    }
    ++solved;
    worst_obj_change = std::max(worst_obj_change, std::abs(sol.objective - sol.conic_objective) / sol.conic_objective);
    for (int k = 0; k < p.num_users; ++k) {
      ++users;
      const auto ev = eigvals(sol.z[k]);
      const double ratio = std::max(0.0, ev(ev.size() - 2)) / ev(ev.size() - 1);

      // Slacks of the reported point.
      const double s = oracle_sinr(in, sol.v, sol.rho, k) / p.gamma_dl - 1;
      const double h = oracle_harvest(in, sol.v, sol.rho, k) / p.q_bar - 1;
      worst_slack = std::max({worst_slack, std::abs(s), std::abs(h)});

      // Slacks of the relaxation itself, from Z and the solver's rho.
      double sig = 0, mui = 0, rx = 0;
      for (int j = 0; j < p.num_users; ++j) {
        const double g = in.ch.h_dl[k].dot(sol.z[j] * in.ch.h_dl[k]).real();
        rx += g;
        (j == k ? sig : mui) += g;
      }
      const double r = sol.sdp_rho[k];
      const double raw_s = r * sig / (r * (mui + in.b.g_bar[k] + p.sigma2_ms) + p.delta2_ms) / p.gamma_dl - 1;
      const double raw_h = (1 - r) * (rx + in.b.g_tilde[k] + p.sigma2_ms) / p.q_bar - 1;
      worst_raw = std::max({worst_raw, std::abs(raw_s), std::abs(raw_h)});

      // Dual certificate, rebuilt from the multipliers.
      ComplexMatrix a = ComplexMatrix::Identity(p.num_tx, p.num_tx);
      for (int j = 0; j < p.num_users; ++j) {
        a += (sol.lambda[j] - sol.mu[j]) * in.ch.h_dl[j] * in.ch.h_dl[j].adjoint();
      }
      a -= sol.lambda[k] * (1 + 1 / p.gamma_dl) * in.ch.h_dl[k] * in.ch.h_dl[k].adjoint();
      const auto ae = eigvals(a);
      const double a_norm = std::max(std::abs(ae(0)), std::abs(ae(ae.size() - 1)));
      const bool psd = ae(0) >= -1e-7 * (1 + a_norm);
      const bool compl_small = (a * sol.z[k]).norm() <= 1e-6 * sol.z[k].trace().real();
      const bool mult = sol.lambda[k] > 1e-10 && sol.mu[k] > 1e-10;
      psd_ok += psd;
      compl_ok += compl_small;
      mult_ok += mult;

      // d/drho of the Lagrangian vanishes at a point with both constraints
      // tight: lambda delta^2 / rho^2 = mu Q / (1 - rho)^2.
      const double rk = sol.rho[k];
      const double implied_mu = sol.lambda[k] * p.delta2_ms * (1 - rk) * (1 - rk) / (rk * rk * p.q_bar);
      if (!mult && implied_mu <= 1e-10) ++implied_tiny;

      std::ostringstream cert;
      cert.precision(3);
      cert << std::scientific << "trial " << t << " user " << k << ": rank ratio " << ratio << ", lambda "
           << sol.lambda[k] << ", mu " << sol.mu[k] << ", rho " << sol.rho[k] << ", min eig A " << ae(0)
           << ", ||A Z|| " << (a * sol.z[k]).norm() << ", tr Z " << sol.z[k].trace().real()
           << ", mu implied by rho-stationarity " << implied_mu;
      if (ratio <= 1e-6) {
        ++rank_ok;
      } else {
        rank_exceptions.push_back(cert.str());
      }
      if (!psd || !compl_small || !mult) mult_exceptions.push_back(cert.str());
    }
  }
  const double secs = seconds_since(t0);

  for (const auto& e : rank_exceptions) std::printf("  rank exception: %s\n", e.c_str());
  report(1, "rank-one", rank_ok >= 0.99 * users && secs <= 60,
         std::to_string(rank_ok) + "/" + std::to_string(users) + " user-instances with ratio <= 1e-6, " +
             std::to_string(solved) + "/" + std::to_string(n) + " solved, " + fmt("%.1f s", secs));

  std::printf("  raw relaxation slack (before power polish) max %.3e; objective change max %.3e relative\n",
              worst_raw, worst_obj_change);
  report(2, "constraint tightness", worst_slack <= 1e-6 && solved == n, fmt("max relative slack %.3e", worst_slack));

  for (const auto& e : mult_exceptions) std::printf("  certificate exception: %s\n", e.c_str());
  std::printf("  %d of %zu multiplier exceptions have a stationarity-implied mu <= 1e-10 as well\n", implied_tiny,
              mult_exceptions.size());
  std::ostringstream d;
  d << "A* PSD " << psd_ok << "/" << users << ", ||A* Z|| small " << compl_ok << "/" << users
    << ", lambda,mu > 1e-10 " << mult_ok << "/" << users;
  report(3, "dual certificate", psd_ok == users && compl_ok == users && mult_ok == users, d.str());
}

// ---------------------------------------------------------------- 4

// rho * [(1 - rho)(gamma(G + s2 + d2/rho) + Gt + s2) - Q], a quadratic in rho.
double harvest_residual_times_rho(const Instance& in, int k, double rho) {
  const auto& p = in.p;
  return (1 - rho) * (rho * p.gamma_dl * (in.b.g_bar[k] + p.sigma2_ms) + p.gamma_dl * p.delta2_ms +
                      rho * (in.b.g_tilde[k] + p.sigma2_ms)) -
         rho * p.q_bar;
}

void zf_closed_form() {
  SystemParams p;
  const int n = 500;
  double worst = 0.0;
  int unique = 0, matched = 0, checked_users = 0;
  for (int t = 0; t < n; ++t) {
    const auto in = draw(p, t, 4242);
    const auto zf = zf::zf_solve(p, in.ch, in.b);
    std::vector<ComplexVector> v;
    std::vector<double> rho;
    for (const auto& u : zf.users) {
      v.push_back(u.v);
      rho.push_back(u.rho);
    }
    for (int k = 0; k < p.num_users; ++k) {
      ++checked_users;
      worst = std::max(worst, std::abs(oracle_sinr(in, v, rho, k) / p.gamma_dl - 1));
      worst = std::max(worst, std::abs(oracle_harvest(in, v, rho, k) / p.q_bar - 1));
      // Interpolate the quadratic through rho = 0, 1/2, 1 and count its roots in (0, 1).
      const long double f0 = harvest_residual_times_rho(in, k, 0.0);
      const long double fh = harvest_residual_times_rho(in, k, 0.5);
      const long double f1 = harvest_residual_times_rho(in, k, 1.0);
      const long double a2 = 2 * (f1 - 2 * fh + f0), a1 = 4 * fh - f1 - 3 * f0, a0 = f0;
      const long double disc = a1 * a1 - 4 * a2 * a0;
      int in_range = 0;
      long double root = -1;
      if (disc >= 0) {
        const long double sq = std::sqrt(disc);
        const long double q = -0.5L * (a1 + (a1 >= 0 ? sq : -sq));
        for (long double r : {q / a2, a0 / q}) {
          if (r > 0 && r < 1) {
            ++in_range;
            root = r;
          }
        }
      }
      unique += in_range == 1;
      matched += in_range == 1 && std::abs(static_cast<double>(root) - rho[k]) <= 1e-9 * (1 + rho[k]);
    }
  }
  report(4, "zf closed form", worst <= 1e-9 && unique == checked_users && matched == checked_users,
         fmt("max relative error %.3e, ", worst) + "unique root " + std::to_string(unique) + "/" +
             std::to_string(checked_users) + ", root matches solver " + std::to_string(matched) + "/" +
             std::to_string(checked_users));
}

// ---------------------------------------------------------------- 5

// Minimum ||v||^2 for one user by zoomed grid over (rho, p) with the
// matched-filter direction; every accepted grid point is feasible.
double single_user_grid(const Instance& in, int n) {
  const auto& P = in.p;
  const double g = in.ch.h_dl[0].squaredNorm();
  auto feasible = [&](double rho, double pw) {
    const double sinr = rho * pw * g / (rho * (in.b.g_bar[0] + P.sigma2_ms) + P.delta2_ms);
    const double eh = (1 - rho) * (pw * g + in.b.g_tilde[0] + P.sigma2_ms);
    return sinr >= P.gamma_dl && eh >= P.q_bar;
  };
  double r_lo = 0.0, r_hi = 1.0, lp_lo = std::log(1e-6), lp_hi = std::log(1e3);
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 8; ++level) {
    const double dr = (r_hi - r_lo) / (n + 1), dp = (lp_hi - lp_lo) / (n - 1);
    std::vector<double> row_min(n + 1, std::numeric_limits<double>::infinity());
    for (int i = 1; i <= n; ++i) {
      const double rho = r_lo + i * dr;
      if (rho <= 0 || rho >= 1) continue;
      for (int j = 0; j < n; ++j) {
        const double pw = std::exp(lp_lo + j * dp);
        if (feasible(rho, pw)) {
          row_min[i] = pw;
          break;
        }
      }
      best = std::min(best, row_min[i]);
    }
    if (!std::isfinite(best)) break;
    // Each row is within one p step of its true minimum, so the optimum lies
    // among the rows within two steps of the best one.
    const double keep = best * std::exp(2 * dp);
    int first = n, last = 1;
    for (int i = 1; i <= n; ++i) {
      if (row_min[i] <= keep) {
        first = std::min(first, i);
        last = std::max(last, i);
      }
    }
    const double new_lo = std::max(0.0, r_lo + (first - 1) * dr), new_hi = std::min(1.0, r_lo + (last + 1) * dr);
    r_lo = new_lo;
    r_hi = new_hi;
    lp_lo = std::log(best) - 2 * dp;
    lp_hi = std::log(best);
  }
  return best;
}

void single_user_exactness() {
  SystemParams p;
  p.num_users = 1;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto in = draw(p, t, 77);
    const auto dl = downlink::solve_downlink(p, in.ch, in.b);
    const auto zf = zf::zf_solve(p, in.ch, in.b);
    worst = std::max(worst, dl.optimal() ? std::abs(dl.objective - zf.objective) / (1 + zf.objective) : 1.0);
  }
  p.num_tx = 2;
  double worst_grid = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto in = draw(p, t, 78);
    const double grid = single_user_grid(in, 200);
    const auto dl = downlink::solve_downlink(p, in.ch, in.b);
    const auto zf = zf::zf_solve(p, in.ch, in.b);
    worst_grid = std::max({worst_grid, std::abs(dl.objective / grid - 1), std::abs(zf.objective / grid - 1)});
  }
  report(5, "single-user exactness", worst <= 1e-5 && worst_grid <= 1e-3,
         fmt("max |jbps - zf|/(1+obj) %.3e, ", worst) + fmt("max grid mismatch %.3e", worst_grid));
}

// ---------------------------------------------------------------- 6

void optimality_ordering() {
  SystemParams p;
  p.gamma_dl = model::db_to_linear(-20);
  p.q_bar = model::dbm_to_watt(20);
  const int n = 500;
  int jointly = 0, ordered = 0;
  double sum_j = 0, sum_z = 0, sum_db = 0;
  for (int t = 0; t < n; ++t) {
    const auto in = draw(p, t, 606);
    const auto dl = downlink::solve_downlink(p, in.ch, in.b);
    const auto zf = zf::zf_solve(p, in.ch, in.b);
    if (!dl.optimal() || !zf.feasible) continue;
    ++jointly;
    ordered += dl.objective <= zf.objective + 1e-6 * (1 + dl.objective);
    sum_j += dl.objective;
    sum_z += zf.objective;
    sum_db += 10 * std::log10(zf.objective / dl.objective);
  }
  const double gap = 10 * std::log10(sum_z / sum_j);
  std::printf("  mean per-trial gap %.3f dB\n", sum_db / jointly);
  report(6, "optimality ordering", ordered == jointly && jointly > 0 && gap >= 0.2 && gap <= 3.0,
         "jbps <= zf on " + std::to_string(ordered) + "/" + std::to_string(jointly) +
             fmt(" trials, gap of mean downlink power %.3f dB", gap));
}

// ---------------------------------------------------------------- 7, 10

std::string config_path(const char* name) { return std::string(FDSWIPT_CONFIG_DIR) + "/" + name; }

void trends() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  struct Sweep {
    const char* file;
    bool increasing;
  };
  for (const Sweep s : {Sweep{"gamma_ul.json", true}, Sweep{"n_t.json", false}, Sweep{"q_dbm.json", true}}) {
    auto cfg = harness::load_config(config_path(s.file));
    cfg.trials = 500;
    const auto res = harness::run_sweep(cfg);
    std::printf("%s", harness::format_csv(res).c_str());
    for (harness::Method m : cfg.methods) {
      double prev = std::numeric_limits<double>::quiet_NaN();
      bool mono = true;
      for (const auto& r : res.rows) {
        if (r.method != m) continue;
        if (r.trials == 0) mono = false;
        if (!std::isnan(prev)) mono = mono && (s.increasing ? r.mean_dbm > prev : r.mean_dbm <= prev);
        prev = r.mean_dbm;
      }
      if (!mono) d << s.file << " " << harness::to_string(m) << " not monotone; ";
      ok = ok && mono;
    }
  }
  const double secs = seconds_since(t0);
  d << fmt("three sweeps x 500 trials in %.1f s", secs);
  report(7, "trend reproduction", ok && secs <= 300, d.str());
}

void determinism() {
  auto cfg = harness::load_config(config_path("gamma_ul.json"));
  cfg.trials = 100;
  cfg.threads = 1;
  const auto a = harness::format_csv(harness::run_sweep(cfg));
  const auto b = harness::format_csv(harness::run_sweep(cfg));
  cfg.threads = 4;
  const auto c = harness::format_csv(harness::run_sweep(cfg));
  cfg.threads = 9;
  const auto e = harness::format_csv(harness::run_sweep(cfg));
  report(10, "determinism", a == b && a == c && a == e,
         "CSV byte-identical across repeat and 1/4/9 threads: " + std::string(a == b && a == c && a == e ? "yes" : "no"));
}

// ---------------------------------------------------------------- 8

// max_w SINR_k = p_k h_k^H (sum_{j != k} p_j h_j h_j^H + N I)^-1 h_k.
bool grid_feasible(const Instance& in, double noise, double p0, double p1) {
  const auto& h = in.ch.h_ul;
  const Eigen::Index nr = h[0].size();
  const ComplexMatrix eye = ComplexMatrix::Identity(nr, nr);
  const ComplexMatrix r0 = p1 * h[1] * h[1].adjoint() + noise * eye;
  const ComplexMatrix r1 = p0 * h[0] * h[0].adjoint() + noise * eye;
  const double s0 = p0 * h[0].dot(r0.ldlt().solve(h[0])).real();
  const double s1 = p1 * h[1].dot(r1.ldlt().solve(h[1])).real();
  return s0 >= in.p.gamma_ul && s1 >= in.p.gamma_ul;
}

// 400 x 400 log grid over [interference-free power, cap], then zoomed passes.
double uplink_grid(const Instance& in, int n) {
  const double noise = in.b.e_bar + in.p.sigma2_bs;
  const double cap = std::min(in.p.q_bar, in.p.p_max);
  double lo[2], hi[2];
  for (int k = 0; k < 2; ++k) {
    lo[k] = std::log(in.p.gamma_ul * noise / in.ch.h_ul[k].squaredNorm());
    hi[k] = std::log(cap);
  }
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 4; ++level) {
    const double d0 = (hi[0] - lo[0]) / (n - 1), d1 = (hi[1] - lo[1]) / (n - 1);
    double b0 = 0, b1 = 0;
    bool found = false;
    for (int i = 0; i < n; ++i) {
      const double p0 = std::exp(lo[0] + i * d0);
      for (int j = 0; j < n; ++j) {
        const double p1 = std::exp(lo[1] + j * d1);
        if (p0 + p1 >= best) break;
        if (grid_feasible(in, noise, p0, p1)) {
          best = p0 + p1;
          b0 = lo[0] + i * d0;
          b1 = lo[1] + j * d1;
          found = true;
          break;
        }
      }
    }
    if (!found) break;
    lo[0] = b0 - 2 * d0;
    hi[0] = b0 + 2 * d0;
    lo[1] = b1 - 2 * d1;
    hi[1] = b1 + 2 * d1;
  }
  return best;
}

void uplink_fixed_point() {
  SystemParams p;  // gamma_ul = -20 dB
  int feasible = 0, converged = 0, window_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto in = draw(p, t, 808);
    uplink::UplinkSolution s;
    try {
      s = uplink::uplink_solve(p, in.ch, in.b);
    } catch (const InfeasibleUplink&) {
      continue;
    }
    ++feasible;
    converged += s.converged && s.iterations <= 50;
    bool ok = true;
    for (int k = 0; k < p.num_users; ++k) {
      double den = (in.b.e_bar + p.sigma2_bs) * s.w[k].squaredNorm();
      for (int j = 0; j < p.num_users; ++j) {
        if (j != k) den += s.p_up[j] * std::norm(s.w[k].dot(in.ch.h_ul[j]));
      }
      const double sinr = s.p_up[k] * std::norm(s.w[k].dot(in.ch.h_ul[k])) / den;
      ok = ok && sinr >= p.gamma_ul * (1 - 1e-12) && sinr <= p.gamma_ul * (1 + 1e-8);
    }
    window_ok += ok;
  }

  double worst = 0.0;
  int grid_runs = 0;
  SystemParams hard = p;  // interference comparable to noise
  hard.gamma_ul = 0.8;
  hard.sigma2_bs = 1e-3;
  hard.q_bar = 10;
  hard.p_max = 10;
  hard.eps2 = 0.0;
  hard.sic_residual_fraction = 1e-3;
  for (const SystemParams* q : {&p, &hard}) {
    for (int t = 0; t < 5; ++t) {
      const auto in = draw(*q, t, 909);
      uplink::UplinkSolution s;
      try {
        s = uplink::uplink_solve(*q, in.ch, in.b);
      } catch (const InfeasibleUplink&) {
        continue;
      }
      const double grid = uplink_grid(in, 400);
      worst = std::max(worst, std::abs(s.total / grid - 1));
      ++grid_runs;
    }
  }
  std::ostringstream d;
  d << "converged " << converged << "/" << feasible << ", SINR window " << window_ok << "/" << feasible
    << fmt(", grid mismatch %.3e", worst) << " over " << grid_runs << " draws";
  report(8, "uplink fixed point", converged >= 0.99 * feasible && window_ok == feasible && worst <= 1e-2 &&
                                      grid_runs >= 8,
         d.str());
}

// ---------------------------------------------------------------- 9

void conic_solver() {
  bool ok = true;
  std::ostringstream d;
  d.precision(3);
  d << std::scientific;
  auto kkt_max = [](const sdp::KktResiduals& r) { return std::max({r.primal, r.dual, std::abs(r.gap)}); };

  {  // min tr X s.t. X - I >= 0 over 3x3 Hermitian X: X = I, objective 3.
    sdp::ConicProblem p;
    const int x = p.add_block(sdp::hermitian_psd(3));
    const int s = p.add_block(sdp::hermitian_psd(3));
    p.objective.add(x, ComplexMatrix::Identity(3, 3));
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        ComplexMatrix e = ComplexMatrix::Zero(3, 3);
        e(i, j) += 0.5;
        e(j, i) += 0.5;
        sdp::LinearFunctional re;
        re.add(x, e).add(s, -e);
        p.add_constraint(re, sdp::Relation::kEqual, i == j ? 1.0 : 0.0);
        if (i != j) {
          ComplexMatrix c = ComplexMatrix::Zero(3, 3);
          c(i, j) = Complex(0, 0.5);
          c(j, i) = Complex(0, -0.5);
          sdp::LinearFunctional im;
          im.add(x, c).add(s, -c);
          p.add_constraint(im, sdp::Relation::kEqual, 0.0);
        }
      }
    }
    const auto sol = sdp::solve(p, 1e-10);
    const double k = kkt_max(sdp::kkt_residuals(p, sol));
    const double err = (sol.primal[x] - ComplexMatrix::Identity(3, 3)).norm();
    const bool pass = sol.status == sdp::SolveStatus::kOptimal && std::abs(sol.objective - 3) <= 1e-8 && k <= 1e-8;
    ok = ok && pass;
    d << "shifted identity kkt " << k << " |X-I| " << err << "; ";
  }
  for (double rho : {0.5, 0.1, 0.9}) {  // min t s.t. [[t, 1], [1, rho]] >= 0: t = 1/rho.
    sdp::ConicProblem p;
    const int b = p.add_block(sdp::real_2x2_psd());
    p.objective.add_entry(b, 2, 0, 0, 1.0);
    sdp::LinearFunctional off, r;
    off.add_entry(b, 2, 0, 1, 1.0);
    r.add_entry(b, 2, 1, 1, 1.0);
    p.add_constraint(off, sdp::Relation::kEqual, 1.0);
    p.add_constraint(r, sdp::Relation::kEqual, rho);
    const auto sol = sdp::solve(p, 1e-10);
    const double k = kkt_max(sdp::kkt_residuals(p, sol));
    const bool pass = sol.status == sdp::SolveStatus::kOptimal &&
                      std::abs(sol.objective - 1 / rho) <= 1e-8 * (1 + 1 / rho) && k <= 1e-8;
    ok = ok && pass;
    d << "hyperbolic rho=" << rho << " kkt " << k << "; ";
  }
  {  // 1 <= x <= 0.
    sdp::ConicProblem p;
    const int x = p.add_block(sdp::nonneg_scalar());
    p.objective.add_scalar(x, 1.0);
    sdp::LinearFunctional lo, hi;
    lo.add_scalar(x, 1.0);
    hi.add_scalar(x, -1.0);
    p.add_constraint(lo, sdp::Relation::kGreaterEqual, 1.0);
    p.add_constraint(hi, sdp::Relation::kGreaterEqual, 0.0);
    const auto sol = sdp::solve(p, 1e-10);
    const bool pass = sol.status == sdp::SolveStatus::kInfeasible && sol.certificate_residual <= 1e-8;
    ok = ok && pass;
    d << "contradictory box " << sdp::to_string(sol.status) << " certificate " << sol.certificate_residual;
  }
  report(9, "conic solver", ok, d.str());
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  downlink_corpus();
  zf_closed_form();
  single_user_exactness();
  optimality_ordering();
  trends();
  uplink_fixed_point();
  conic_solver();
  determinism();
  std::printf("%d criterion failure(s), %.1f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
