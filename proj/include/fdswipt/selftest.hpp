#pragma once

// Quick analytic and oracle checks for the `selftest` command.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "fdswipt/harness.hpp"
#include "fdswipt/sdp/kkt.hpp"
#include "fdswipt/sdp/solver.hpp"

namespace fdswipt::selftest {

using harness::Check;

namespace detail {

inline std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

inline double kkt_max(const sdp::KktResiduals& r) {
  return std::max({r.primal, r.dual, std::abs(r.gap)});
}

// min tr X s.t. X = I + P, P >= 0 (real 2x2 blocks).
inline sdp::ConicProblem shifted_identity() {
  sdp::ConicProblem p;
  const int x = p.add_block(sdp::symmetric_psd(2));
  const int s = p.add_block(sdp::symmetric_psd(2));
  p.objective.add(x, ComplexMatrix::Identity(2, 2));
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      sdp::LinearFunctional f;
      f.add_entry(x, 2, i, j, 1.0).add_entry(s, 2, i, j, -1.0);
      p.add_constraint(f, sdp::Relation::kEqual, i == j ? 1.0 : 0.0);
    }
  }
  return p;
}

// min t s.t. [[t, 1], [1, rho]] >= 0.
inline sdp::ConicProblem hyperbolic(double rho) {
  sdp::ConicProblem p;
  const int b = p.add_block(sdp::real_2x2_psd());
  p.objective.add_entry(b, 2, 0, 0, 1.0);
  sdp::LinearFunctional off, r;
  off.add_entry(b, 2, 0, 1, 1.0);
  r.add_entry(b, 2, 1, 1, 1.0);
  p.add_constraint(off, sdp::Relation::kEqual, 1.0);
  p.add_constraint(r, sdp::Relation::kEqual, rho);
  return p;
}

// x >= 1 and x <= 0.
inline sdp::ConicProblem contradictory_box() {
  sdp::ConicProblem p;
  const int x = p.add_block(sdp::nonneg_scalar());
  p.objective.add_scalar(x, 1.0);
  sdp::LinearFunctional lo, hi;
  lo.add_scalar(x, 1.0);
  hi.add_scalar(x, -1.0);
  p.add_constraint(lo, sdp::Relation::kGreaterEqual, 1.0);
  p.add_constraint(hi, sdp::Relation::kGreaterEqual, 0.0);
  return p;
}

}  // namespace detail

inline std::vector<Check> run() {
  using detail::sci;
  std::vector<Check> out;

  {
    const auto p = detail::shifted_identity();
    const auto s = sdp::solve(p, 1e-10);
    const double k = detail::kkt_max(sdp::kkt_residuals(p, s));
    out.push_back({"sdp: shifted identity", s.status == sdp::SolveStatus::kOptimal &&
                                                std::abs(s.objective - 2.0) <= 1e-8 && k <= 1e-8,
                   "objective " + sci(s.objective) + ", kkt " + sci(k)});
  }
  {
    const auto p = detail::hyperbolic(0.25);
    const auto s = sdp::solve(p, 1e-10);
    const double k = detail::kkt_max(sdp::kkt_residuals(p, s));
    out.push_back({"sdp: hyperbolic boundary t = 1/rho",
                   s.status == sdp::SolveStatus::kOptimal && std::abs(s.objective - 4.0) <= 1e-8 && k <= 1e-8,
                   "objective " + sci(s.objective) + ", kkt " + sci(k)});
  }
  {
    const auto s = sdp::solve(detail::contradictory_box(), 1e-8);
    out.push_back({"sdp: contradictory box", s.status == sdp::SolveStatus::kInfeasible,
                   std::string("status ") + sdp::to_string(s.status)});
  }

  model::SystemParams base;
  base.gamma_ul = model::db_to_linear(-30);
  {
    model::SystemParams p = base;
    p.num_users = 1;
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto ch = model::sample_channels(p, t, 7);
      const auto b = model::compute_bounds(p, ch);
      const auto dl = downlink::solve_downlink(p, ch, b);
      const auto zf = zf::zf_solve(p, ch, b);
      worst = std::max(worst, dl.optimal() ? std::abs(dl.objective - zf.objective) / (1 + zf.objective) : 1.0);
    }
    out.push_back({"single user: jbps equals zf", worst <= 1e-5, "max relative gap " + sci(worst)});
  }
  {
    double worst_rank = 0.0, worst_slack = 0.0;
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto ch = model::sample_channels(base, t, 7);
      const auto b = model::compute_bounds(base, ch);
      const auto dl = downlink::solve_downlink(base, ch, b);
      if (!dl.optimal()) {
        worst_rank = 1.0;
        continue;
      }
      for (const auto& c : dl.certificates) {
        worst_rank = std::max(worst_rank, c.rank_ratio);
        worst_slack = std::max({worst_slack, std::abs(c.sinr_slack), std::abs(c.harvest_slack)});
      }
    }
    out.push_back({"jbps: rank one", worst_rank <= 1e-6, "max rank ratio " + sci(worst_rank)});
    out.push_back({"jbps: constraints tight", worst_slack <= 1e-6, "max slack " + sci(worst_slack)});
  }
  {
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto ch = model::sample_channels(base, t, 9);
      const auto b = model::compute_bounds(base, ch);
      const auto zf = zf::zf_solve(base, ch, b);
      const std::vector<ComplexVector> v = {zf.users[0].v, zf.users[1].v};
      const auto g = downlink::gains(ch, v);
      const std::vector<double> rho = {zf.users[0].rho, zf.users[1].rho};
      for (int k = 0; k < 2; ++k) {
        worst = std::max(worst, std::abs(downlink::achieved_sinr(base, b, g, rho, k) / base.gamma_dl - 1));
        worst = std::max(worst, std::abs(downlink::harvested_power(base, b, g, rho, k) / base.q_bar - 1));
      }
    }
    out.push_back({"zf: closed form meets both targets", worst <= 1e-9, "max relative error " + sci(worst)});
  }
  {
    model::SystemParams p = base;
    p.num_users = 1;
    const auto ch = model::sample_channels(p, 0, 3);
    const auto b = model::compute_bounds(p, ch);
    const auto ul = uplink::uplink_solve(p, ch, b);
    const double expect = p.gamma_ul * (b.e_bar + p.sigma2_bs) / ch.h_ul[0].squaredNorm();
    const double err = std::abs(ul.total / expect - 1);
    out.push_back({"uplink: single user closed form", ul.converged && err <= 1e-12, "relative error " + sci(err)});
  }
  {
    int converged = 0, runs = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      const auto ch = model::sample_channels(base, t, 5);
      try {
        const auto ul = uplink::uplink_solve(base, ch, model::compute_bounds(base, ch));
        ++runs;
        converged += ul.converged;
      } catch (const InfeasibleUplink&) {
      }
    }
    out.push_back({"uplink: fixed point converges", runs > 0 && converged >= 0.99 * runs,
                   std::to_string(converged) + "/" + std::to_string(runs)});
  }
  {
    const auto a = harness::run_point(base, 5, 1, harness::Method::kJbps);
    const auto b = harness::run_point(base, 5, 1, harness::Method::kJbps);
    out.push_back({"harness: repeat is bitwise identical", a.total == b.total && a.feasible,
                   "total " + sci(a.total) + " W"});
  }
  return out;
}

}  // namespace fdswipt::selftest
