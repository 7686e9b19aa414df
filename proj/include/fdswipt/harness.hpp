#pragma once

// Monte Carlo driver: per-trial joint solve, threaded sweeps, CSV output and
// JSON (de)serialization of single solutions.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fdswipt/downlink_jbps.hpp"
#include "fdswipt/downlink_zf.hpp"
#include "fdswipt/errors.hpp"
#include "fdswipt/system_model.hpp"
#include "fdswipt/uplink.hpp"

namespace fdswipt::harness {

using json = nlohmann::json;
using model::ChannelRealization;
using model::RobustBounds;
using model::SystemParams;

enum class Method { kJbps, kZf };

inline const char* to_string(Method m) { return m == Method::kJbps ? "jbps" : "zf"; }

inline Method parse_method(const std::string& s) {
  if (s == "jbps") return Method::kJbps;
  if (s == "zf") return Method::kZf;
  throw ContractViolation("unknown method '" + s + "' (expected jbps or zf)");
}

/// "jbps", "zf" or "both".
inline std::vector<Method> parse_methods(const std::string& s) {
  if (s == "both") return {Method::kJbps, Method::kZf};
  return {parse_method(s)};
}

enum class SweepVar { kGammaUlDb, kNt, kQDbm };

inline const char* to_string(SweepVar v) {
  switch (v) {
    case SweepVar::kGammaUlDb: return "gamma_ul_db";
    case SweepVar::kNt: return "n_t";
    case SweepVar::kQDbm: return "q_dbm";
  }
  return "?";
}

struct ExperimentConfig {
  SystemParams params;
  SweepVar sweep_var = SweepVar::kGammaUlDb;
  std::vector<double> sweep_values;
  int trials = 500;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::kJbps, Method::kZf};
  std::string output_path;
  int threads = 0;  // 0: hardware concurrency
  bool rx_follows_tx = false;  // n_t sweeps: N_r = N_t at every point
  uplink::FilterNoise filter_noise = uplink::FilterNoise::kWorstCase;

  void validate() const {
    params.validate();
    if (trials < 1) throw ContractViolation("config: trials must be >= 1");
    if (sweep_values.empty()) throw ContractViolation("config: sweep needs at least one value");
    if (methods.empty()) throw ContractViolation("config: methods must not be empty");
    if (threads < 0) throw ContractViolation("config: threads must be >= 0");
    if (sweep_var == SweepVar::kNt) {
      for (double v : sweep_values) {
        if (v < 1 || v != std::floor(v)) throw ContractViolation("config: n_t values must be positive integers");
      }
    }
  }

  /// Parameters at one sweep point.
  SystemParams at(double value) const {
    SystemParams p = params;
    switch (sweep_var) {
      case SweepVar::kGammaUlDb: p.gamma_ul = model::db_to_linear(value); break;
      case SweepVar::kQDbm: p.q_bar = model::dbm_to_watt(value); break;
      case SweepVar::kNt:
        p.num_tx = static_cast<int>(value);
        if (rx_follows_tx) p.num_rx = p.num_tx;
        break;
    }
    return p;
  }
};

namespace detail {

inline double take_number(json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ContractViolation(std::string("config: '") + key + "' must be a number");
  const double v = j[key].get<double>();
  j.erase(key);
  return v;
}

inline int take_int(json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw ContractViolation(std::string("config: '") + key + "' must be an integer");
  const int v = j[key].get<int>();
  j.erase(key);
  return v;
}

inline double to_dbm(double w) { return model::watt_to_dbm(w); }
inline double to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace detail

/// Parses a config object. Unknown keys are rejected so typos do not pass
/// silently. Fields ending in _db are ratios in dB, _dbm powers in dBm.
/// Without require_sweep a missing sweep leaves the base parameters as the
/// single point.
inline ExperimentConfig config_from_json(json j, bool require_sweep = true) {
  if (!j.is_object()) throw ContractViolation("config: top level must be an object");
  ExperimentConfig c;
  SystemParams& p = c.params;
  p.num_users = detail::take_int(j, "num_users", p.num_users);
  p.num_tx = detail::take_int(j, "num_tx", p.num_tx);
  p.num_rx = detail::take_int(j, "num_rx", p.num_rx);
  p.sigma2_ms = model::dbm_to_watt(detail::take_number(j, "sigma2_dbm", detail::to_dbm(p.sigma2_ms)));
  p.delta2_ms = model::dbm_to_watt(detail::take_number(j, "delta2_dbm", detail::to_dbm(p.delta2_ms)));
  p.sigma2_bs = model::dbm_to_watt(detail::take_number(j, "sigma2_bs_dbm", detail::to_dbm(p.sigma2_bs)));
  p.gamma_dl = model::db_to_linear(detail::take_number(j, "gamma_dl_db", detail::to_db(p.gamma_dl)));
  p.gamma_ul = model::db_to_linear(detail::take_number(j, "gamma_ul_db", detail::to_db(p.gamma_ul)));
  p.q_bar = model::dbm_to_watt(detail::take_number(j, "q_dbm", detail::to_dbm(p.q_bar)));
  p.p_max = model::dbm_to_watt(detail::take_number(j, "p_max_dbm", detail::to_dbm(p.p_max)));
  p.eps1 = detail::take_number(j, "eps1", p.eps1);
  p.eps2 = detail::take_number(j, "eps2", p.eps2);
  p.sic_residual_fraction = detail::take_number(j, "sic_residual_fraction", p.sic_residual_fraction);
  c.trials = detail::take_int(j, "trials", c.trials);
  c.threads = detail::take_int(j, "threads", c.threads);

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ContractViolation("config: 'seed' must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
    j.erase("seed");
  }
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j["methods"]) c.methods.push_back(parse_method(m.get<std::string>()));
    j.erase("methods");
  }
  if (j.contains("output_path")) {
    c.output_path = j["output_path"].get<std::string>();
    j.erase("output_path");
  }
  if (j.contains("rx_follows_tx")) {
    c.rx_follows_tx = j["rx_follows_tx"].get<bool>();
    j.erase("rx_follows_tx");
  }
  if (j.contains("uplink_filter_noise")) {
    const auto s = j["uplink_filter_noise"].get<std::string>();
    if (s == "worst_case") {
      c.filter_noise = uplink::FilterNoise::kWorstCase;
    } else if (s == "beamformer_power") {
      c.filter_noise = uplink::FilterNoise::kBeamformerPower;
    } else {
      throw ContractViolation("config: uplink_filter_noise must be worst_case or beamformer_power");
    }
    j.erase("uplink_filter_noise");
  }

  if (!j.contains("sweep") && !require_sweep) {
    c.sweep_var = SweepVar::kNt;
    c.sweep_values = {static_cast<double>(p.num_tx)};
  } else {
    if (!j.contains("sweep") || !j["sweep"].is_object() || j["sweep"].size() != 1) {
      throw ContractViolation("config: 'sweep' must be an object with exactly one axis");
    }
    const std::string axis = j["sweep"].begin().key();
    const json& values = j["sweep"].begin().value();
    if (axis == "gamma_ul_db") {
      c.sweep_var = SweepVar::kGammaUlDb;
    } else if (axis == "n_t") {
      c.sweep_var = SweepVar::kNt;
    } else if (axis == "q_dbm") {
      c.sweep_var = SweepVar::kQDbm;
    } else {
      throw ContractViolation("config: unknown sweep axis '" + axis + "'");
    }
    if (!values.is_array()) throw ContractViolation("config: sweep values must be a list");
    for (const auto& v : values) c.sweep_values.push_back(v.get<double>());
    j.erase("sweep");
  }

  if (!j.empty()) throw ContractViolation("config: unknown key '" + j.begin().key() + "'");
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path, bool require_sweep = true) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw IoError("config '" + path + "': " + e.what());
  }
  try {
    return config_from_json(std::move(j), require_sweep);
  } catch (const json::exception& e) {
    throw ContractViolation("config '" + path + "': " + e.what());
  } catch (const ContractViolation& e) {
    throw ContractViolation("'" + path + "': " + e.what());
  }
}

/// One joint solve: downlink by the chosen method plus the uplink.
struct TrialResult {
  bool feasible = false;
  double downlink_power = 0.0;
  double uplink_power = 0.0;
  double total = 0.0;
  double max_rank_ratio = 0.0;  // 0 for ZF
  bool cap_violation = false;
  std::string error;  // empty when the trial solved
};

/// Everything a solved realization produces, for printing and re-certifying.
struct JointSolution {
  Method method = Method::kJbps;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  SystemParams params;
  ChannelRealization channels;
  RobustBounds bounds;
  std::vector<ComplexVector> v;
  std::vector<double> rho;
  std::vector<ComplexMatrix> z;
  std::vector<double> lambda, mu;
  std::vector<ComplexVector> w;
  std::vector<double> p_up;
  std::vector<double> uplink_sinr;
  std::vector<downlink::UserCertificate> certificates;
  double downlink_power = 0.0;
  double uplink_power = 0.0;
  TrialResult result;
};

inline JointSolution solve_joint(const SystemParams& params, std::uint64_t trial, std::uint64_t seed, Method method,
                                 uplink::FilterNoise filter_noise = uplink::FilterNoise::kWorstCase) {
  JointSolution s;
  s.method = method;
  s.seed = seed;
  s.trial = trial;
  s.params = params;
  s.channels = model::sample_channels(params, trial, seed);
  s.bounds = model::compute_bounds(params, s.channels);
  TrialResult& r = s.result;

  if (method == Method::kJbps) {
    auto dl = downlink::solve_downlink(params, s.channels, s.bounds);
    if (!dl.optimal()) {
      r.error = std::string("downlink: ") + sdp::to_string(dl.status);
      return s;
    }
    s.v = dl.v;
    s.rho = dl.rho;
    s.z = dl.z;
    s.lambda = dl.lambda;
    s.mu = dl.mu;
    s.certificates = dl.certificates;
    s.downlink_power = dl.objective;
    r.cap_violation = dl.cap_violation;
    for (const auto& c : dl.certificates) r.max_rank_ratio = std::max(r.max_rank_ratio, c.rank_ratio);
  } else {
    if (params.num_tx < params.num_users) {
      r.error = "downlink: zero forcing needs N_t >= K";
      return s;
    }
    const auto zf = zf::zf_solve(params, s.channels, s.bounds);
    if (!zf.feasible) {
      r.error = "downlink: degenerate channel for zero forcing";
      return s;
    }
    for (const auto& u : zf.users) {
      s.v.push_back(u.v);
      s.rho.push_back(u.rho);
      s.z.push_back(linalg::outer(u.v));
    }
    s.downlink_power = zf.objective;
    r.cap_violation = zf.cap_violation;
  }
  r.downlink_power = s.downlink_power;

  uplink::UplinkOptions opt;
  opt.filter_noise = filter_noise;
  opt.downlink_power = s.downlink_power;
  try {
    const auto ul = uplink::uplink_solve(params, s.channels, s.bounds, opt);
    if (!ul.converged) {
      r.error = "uplink: no convergence in " + std::to_string(ul.iterations) + " iterations";
      return s;
    }
    s.w = ul.w;
    s.p_up = ul.p_up;
    s.uplink_sinr = ul.sinr;
    s.uplink_power = ul.total;
  } catch (const InfeasibleUplink& e) {
    r.error = std::string("uplink: ") + e.what();
    return s;
  }
  r.uplink_power = s.uplink_power;
  r.total = r.downlink_power + r.uplink_power;
  if (r.cap_violation) {
    r.error = "downlink: beamformer power above P_max";
    return s;
  }
  r.feasible = true;
  return s;
}

/// Solver exceptions are recorded in the result, never propagated.
inline TrialResult run_point(const SystemParams& params, std::uint64_t trial, std::uint64_t seed, Method method,
                             uplink::FilterNoise filter_noise = uplink::FilterNoise::kWorstCase) {
  try {
    return solve_joint(params, trial, seed, method, filter_noise).result;
  } catch (const std::exception& e) {
    TrialResult r;
    r.error = e.what();
    return r;
  }
}

struct SweepRow {
  double value = 0.0;
  Method method = Method::kJbps;
  double mean_dbm = std::numeric_limits<double>::quiet_NaN();
  double std_dbm = std::numeric_limits<double>::quiet_NaN();
  double feasible_frac = 0.0;
  double mean_rank_ratio = std::numeric_limits<double>::quiet_NaN();
  int trials = 0;  // feasible trials behind the means
  int attempted = 0;
  double min_total = 0.0, max_total = 0.0;  // watts, over feasible trials
};

struct SweepResult {
  SweepVar sweep_var = SweepVar::kGammaUlDb;
  std::vector<SweepRow> rows;
  std::vector<std::vector<TrialResult>> trials;  // parallel to rows, by trial index

  bool any_infeasible_only() const {
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.trials == 0; });
  }
};

/// mean_dbm is the dBm value of the mean linear total; std_dbm is the
/// sample standard deviation of the per-trial totals in dBm.
inline SweepRow aggregate(double value, Method method, const std::vector<TrialResult>& ts) {
  SweepRow row;
  row.value = value;
  row.method = method;
  row.attempted = static_cast<int>(ts.size());
  double sum = 0.0, sum_rank = 0.0;
  std::vector<double> dbm;
  for (const auto& t : ts) {
    if (!t.feasible) continue;
    if (dbm.empty()) {
      row.min_total = row.max_total = t.total;
    } else {
      row.min_total = std::min(row.min_total, t.total);
      row.max_total = std::max(row.max_total, t.total);
    }
    sum += t.total;
    sum_rank += t.max_rank_ratio;
    dbm.push_back(model::watt_to_dbm(t.total));
  }
  row.trials = static_cast<int>(dbm.size());
  row.feasible_frac = ts.empty() ? 0.0 : static_cast<double>(row.trials) / static_cast<double>(ts.size());
  if (row.trials == 0) return row;
  const double n = static_cast<double>(row.trials);
  row.mean_dbm = model::watt_to_dbm(sum / n);
  row.mean_rank_ratio = sum_rank / n;
  double m = 0.0;
  for (double d : dbm) m += d;
  m /= n;
  double ss = 0.0;
  for (double d : dbm) ss += (d - m) * (d - m);
  row.std_dbm = row.trials > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  return row;
}

/// Trials are keyed by (seed, index), so every sweep point and method sees
/// the same realizations and the result does not depend on the thread count.
inline SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Job {
    std::size_t row;
    SystemParams params;
    Method method;
  };
  std::vector<Job> jobs;
  SweepResult out;
  out.sweep_var = cfg.sweep_var;
  for (double value : cfg.sweep_values) {
    const SystemParams p = cfg.at(value);
    for (Method m : cfg.methods) {
      jobs.push_back({out.rows.size(), p, m});
      SweepRow row;
      row.value = value;
      row.method = m;
      out.rows.push_back(row);
    }
  }
  out.trials.assign(out.rows.size(), std::vector<TrialResult>(cfg.trials));

  const std::size_t total = jobs.size() * static_cast<std::size_t>(cfg.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const auto& job = jobs[i / cfg.trials];
      const std::size_t t = i % cfg.trials;
      out.trials[job.row][t] = run_point(job.params, t, cfg.seed, job.method, cfg.filter_noise);
    }
  };
  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(total)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    out.rows[r] = aggregate(out.rows[r].value, out.rows[r].method, out.trials[r]);
  }
  return out;
}

inline std::string format_csv(const SweepResult& res) {
  std::ostringstream os;
  os << "sweep_var,value,method,mean_dbm,std_dbm,feasible_frac,mean_rank_ratio,trials\n";
  auto num = [&](double x) {
    if (std::isnan(x)) {
      os << "nan";
    } else {
      os << x;
    }
  };
  os << std::setprecision(10);
  for (const auto& r : res.rows) {
    os << to_string(res.sweep_var) << ',';
    num(r.value);
    os << ',' << to_string(r.method) << ',';
    num(r.mean_dbm);
    os << ',';
    num(r.std_dbm);
    os << ',';
    num(r.feasible_frac);
    os << ',';
    num(r.mean_rank_ratio);
    os << ',' << r.trials << '\n';
  }
  return os.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

// JSON helpers. Complex numbers are [re, im] pairs, matrices row-major lists
// of rows.

namespace detail {

inline json to_json(const ComplexVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

inline ComplexVector vector_from_json(const json& a) {
  ComplexVector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(i) = Complex(a[i].at(0).get<double>(), a[i].at(1).get<double>());
  return v;
}

inline json to_json(const ComplexMatrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(ComplexVector(m.row(i).transpose())));
  return a;
}

inline ComplexMatrix matrix_from_json(const json& a) {
  const auto rows = static_cast<Eigen::Index>(a.size());
  const auto cols = rows ? static_cast<Eigen::Index>(a[0].size()) : 0;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(a[i].size()) != cols) throw ContractViolation("solution json: ragged matrix");
    m.row(i) = vector_from_json(a[i]).transpose();
  }
  return m;
}

template <class T, class F>
json list(const std::vector<T>& xs, F f) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(f(x));
  return a;
}

}  // namespace detail

inline json params_to_json(const SystemParams& p) {
  return {{"num_users", p.num_users}, {"num_tx", p.num_tx},       {"num_rx", p.num_rx},
          {"sigma2_ms", p.sigma2_ms}, {"delta2_ms", p.delta2_ms}, {"sigma2_bs", p.sigma2_bs},
          {"gamma_dl", p.gamma_dl},   {"gamma_ul", p.gamma_ul},   {"q_bar", p.q_bar},
          {"p_max", p.p_max},         {"eps1", p.eps1},           {"eps2", p.eps2},
          {"sic_residual_fraction", p.sic_residual_fraction}};
}

inline SystemParams params_from_json(const json& j) {
  SystemParams p;
  p.num_users = j.at("num_users").get<int>();
  p.num_tx = j.at("num_tx").get<int>();
  p.num_rx = j.at("num_rx").get<int>();
  p.sigma2_ms = j.at("sigma2_ms").get<double>();
  p.delta2_ms = j.at("delta2_ms").get<double>();
  p.sigma2_bs = j.at("sigma2_bs").get<double>();
  p.gamma_dl = j.at("gamma_dl").get<double>();
  p.gamma_ul = j.at("gamma_ul").get<double>();
  p.q_bar = j.at("q_bar").get<double>();
  p.p_max = j.at("p_max").get<double>();
  p.eps1 = j.at("eps1").get<double>();
  p.eps2 = j.at("eps2").get<double>();
  p.sic_residual_fraction = j.at("sic_residual_fraction").get<double>();
  p.validate();
  return p;
}

/// Linear units throughout; a saved solution round-trips bit for bit.
inline json solution_to_json(const JointSolution& s) {
  using detail::list;
  using detail::to_json;
  const auto& r = s.result;
  json certs = json::array();
  for (const auto& c : s.certificates) {
    certs.push_back({{"rank_ratio", c.rank_ratio},
                     {"sinr_slack", c.sinr_slack},
                     {"harvest_slack", c.harvest_slack},
                     {"cert_min_eig", c.cert_min_eig},
                     {"cert_compl_norm", c.cert_compl_norm}});
  }
  return {
      {"method", to_string(s.method)},
      {"seed", s.seed},
      {"trial", s.trial},
      {"params", params_to_json(s.params)},
      {"feasible", r.feasible},
      {"error", r.error},
      {"cap_violation", r.cap_violation},
      {"downlink_power_w", s.downlink_power},
      {"uplink_power_w", s.uplink_power},
      {"total_power_w", r.total},
      {"total_power_dbm", r.total > 0 ? model::watt_to_dbm(r.total) : -std::numeric_limits<double>::infinity()},
      {"max_rank_ratio", r.max_rank_ratio},
      {"v", list(s.v, [](const ComplexVector& x) { return to_json(x); })},
      {"rho", s.rho},
      {"z", list(s.z, [](const ComplexMatrix& x) { return to_json(x); })},
      {"lambda", s.lambda},
      {"mu", s.mu},
      {"w", list(s.w, [](const ComplexVector& x) { return to_json(x); })},
      {"p_up", s.p_up},
      {"uplink_sinr", s.uplink_sinr},
      {"certificates", certs},
      {"channels",
       {{"h_dl", list(s.channels.h_dl, [](const ComplexVector& x) { return to_json(x); })},
        {"h_ul", list(s.channels.h_ul, [](const ComplexVector& x) { return to_json(x); })},
        {"h_si_ms", to_json(ComplexVector(Eigen::Map<const ComplexVector>(
                        s.channels.h_si_ms.data(), static_cast<Eigen::Index>(s.channels.h_si_ms.size()))))},
        {"h_si_bs", to_json(s.channels.h_si_bs)}}},
  };
}

inline JointSolution solution_from_json(const json& j) {
  JointSolution s;
  try {
    s.method = parse_method(j.at("method").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    s.trial = j.at("trial").get<std::uint64_t>();
    s.params = params_from_json(j.at("params"));
    const auto& ch = j.at("channels");
    for (const auto& h : ch.at("h_dl")) s.channels.h_dl.push_back(detail::vector_from_json(h));
    for (const auto& h : ch.at("h_ul")) s.channels.h_ul.push_back(detail::vector_from_json(h));
    const ComplexVector si = detail::vector_from_json(ch.at("h_si_ms"));
    s.channels.h_si_ms.assign(si.data(), si.data() + si.size());
    s.channels.h_si_bs = detail::matrix_from_json(ch.at("h_si_bs"));
    s.channels.seed_tag = {s.seed, s.trial};
    s.bounds = model::compute_bounds(s.params, s.channels);
    for (const auto& x : j.at("v")) s.v.push_back(detail::vector_from_json(x));
    for (const auto& x : j.at("z")) s.z.push_back(detail::matrix_from_json(x));
    for (const auto& x : j.at("w")) s.w.push_back(detail::vector_from_json(x));
    s.rho = j.at("rho").get<std::vector<double>>();
    s.lambda = j.at("lambda").get<std::vector<double>>();
    s.mu = j.at("mu").get<std::vector<double>>();
    s.p_up = j.at("p_up").get<std::vector<double>>();
    s.uplink_sinr = j.at("uplink_sinr").get<std::vector<double>>();
    s.downlink_power = j.at("downlink_power_w").get<double>();
    s.uplink_power = j.at("uplink_power_w").get<double>();
    s.result.feasible = j.at("feasible").get<bool>();
    s.result.error = j.at("error").get<std::string>();
    s.result.cap_violation = j.at("cap_violation").get<bool>();
    s.result.total = j.at("total_power_w").get<double>();
    s.result.max_rank_ratio = j.at("max_rank_ratio").get<double>();
    s.result.downlink_power = s.downlink_power;
    s.result.uplink_power = s.uplink_power;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("solution json: ") + e.what());
  }
  const auto k = static_cast<std::size_t>(s.params.num_users);
  if (s.channels.h_dl.size() != k || s.channels.h_ul.size() != k || s.channels.h_si_ms.size() != k) {
    throw ContractViolation("solution json: channel count does not match num_users");
  }
  return s;
}

/// One named pass/fail check.
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Recomputes every optimality check of a saved solution from its channels.
inline std::vector<Check> certify_solution(const JointSolution& s) {
  std::vector<Check> out;
  auto add = [&](std::string name, bool pass, double value, double limit) {
    std::ostringstream d;
    d << std::setprecision(3) << std::scientific << value << " vs " << limit;
    out.push_back({std::move(name), pass, d.str()});
  };
  const auto& p = s.params;
  const int k_users = p.num_users;
  if (s.v.size() != static_cast<std::size_t>(k_users) || s.rho.size() != s.v.size()) {
    out.push_back({"solution present", false, s.result.error.empty() ? "no beamformers" : s.result.error});
    return out;
  }
  const auto g = downlink::gains(s.channels, s.v);
  for (int k = 0; k < k_users; ++k) {
    const std::string u = "user " + std::to_string(k) + ": ";
    const double ss = downlink::achieved_sinr(p, s.bounds, g, s.rho, k) / p.gamma_dl - 1.0;
    const double hs = downlink::harvested_power(p, s.bounds, g, s.rho, k) / p.q_bar - 1.0;
    add(u + "downlink SINR tight", ss >= -1e-9 && ss <= 1e-6, ss, 1e-6);
    add(u + "harvested power tight", hs >= -1e-9 && hs <= 1e-6, hs, 1e-6);
    if (s.method == Method::kZf) {
      double leak = 0.0;
      for (int j = 0; j < k_users; ++j) {
        if (j != k) leak = std::max(leak, std::abs(s.channels.h_dl[j].dot(s.v[k])));
      }
      add(u + "zero forcing leakage", leak <= 1e-9 * (1 + s.v[k].norm()), leak, 1e-9);
      continue;
    }
    if (s.z.size() != s.v.size() || s.lambda.size() != s.v.size() || s.mu.size() != s.v.size()) {
      out.push_back({u + "dual data present", false, "missing z, lambda or mu"});
      continue;
    }
    const auto ze = linalg::hermitian_eig(s.z[k]);
    const double ratio = ze.eigenvalues.size() > 1 ? std::max(0.0, ze.eigenvalues(1)) / ze.eigenvalues(0) : 0.0;
    add(u + "rank one", ratio <= 1e-6, ratio, 1e-6);
    const ComplexMatrix a = downlink::certificate_matrix(p, s.channels, s.lambda, s.mu, k);
    const auto ae = linalg::hermitian_eig(a);
    const double min_eig = ae.eigenvalues(ae.eigenvalues.size() - 1);
    const double norm = std::max(std::abs(ae.eigenvalues(0)), std::abs(min_eig));
    add(u + "certificate PSD", min_eig >= -1e-7 * (1 + norm), min_eig, -1e-7 * (1 + norm));
    const double tr = s.z[k].trace().real();
    const double compl_norm = (a * s.z[k]).norm();
    add(u + "complementarity", compl_norm <= 1e-6 * tr, compl_norm, 1e-6 * tr);
    add(u + "SINR multiplier positive", s.lambda[k] > 1e-10, s.lambda[k], 1e-10);
    add(u + "harvest multiplier positive", s.mu[k] > 1e-10, s.mu[k], 1e-10);
  }
  if (!s.w.empty()) {
    const auto sinr = uplink::uplink_sinr(s.channels, s.w, s.p_up, s.bounds.e_bar, p.sigma2_bs);
    for (int k = 0; k < k_users; ++k) {
      const double r = sinr[k] / p.gamma_ul - 1.0;
      add("user " + std::to_string(k) + ": uplink SINR at target", r >= -1e-9 && r <= 1e-8, r, 1e-8);
    }
  }
  return out;
}

}  // namespace fdswipt::harness
