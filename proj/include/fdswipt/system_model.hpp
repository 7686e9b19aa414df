#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fdswipt/errors.hpp"
#include "fdswipt/linalg.hpp"

namespace fdswipt::model {

/// Scenario scalars. Every power is in linear watts, every ratio linear.
struct SystemParams {
  int num_users = 2;         // K
  int num_tx = 4;            // N_t
  int num_rx = 2;            // N_r
  double sigma2_ms = 1e-5;   // antenna noise at each MS
  double delta2_ms = 1e-5;   // ID processing noise
  double sigma2_bs = 1e-5;   // BS receiver noise
  double gamma_dl = 0.01;    // downlink SINR target
  double gamma_ul = 0.01;    // uplink SINR target
  double q_bar = 0.1;        // harvested-power target
  double p_max = 1.0;        // per-node transmit cap
  double eps1 = 0.1;         // MS loop-channel error bound
  double eps2 = 0.1;         // BS loop-channel error bound
  double eta = 1.0;          // RF-to-DC conversion efficiency
  double sic_residual_fraction = 0.4;

  /// Throws ContractViolation describing the first offending field.
  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw ContractViolation(std::string("SystemParams: ") + what);
    };
    require(num_users >= 1, "num_users must be >= 1");
    require(num_tx >= 1, "num_tx must be >= 1");
    require(num_rx >= 1, "num_rx must be >= 1");
    require(sigma2_ms > 0 && sigma2_bs > 0 && delta2_ms > 0, "noise powers must be positive");
    require(gamma_dl > 0 && gamma_ul > 0, "SINR targets must be positive");
    require(q_bar > 0, "q_bar must be positive");
    require(p_max > 0, "p_max must be positive");
    require(eps1 >= 0 && eps2 >= 0, "eps1/eps2 must be nonnegative");
    require(eta == 1.0, "eta is fixed at 1");
    require(sic_residual_fraction > 0 && sic_residual_fraction <= 1,
            "sic_residual_fraction must lie in (0, 1]");
  }
};

/// RNG coordinates of a draw.
struct SeedTag {
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;
  friend bool operator==(const SeedTag&, const SeedTag&) = default;
};

struct ChannelRealization {
  std::vector<ComplexVector> h_dl;  // K vectors of length N_t
  std::vector<ComplexVector> h_ul;  // K vectors of length N_r
  std::vector<Complex> h_si_ms;     // estimated MS loop channels
  ComplexMatrix h_si_bs;            // estimated BS loop channel, N_r x N_t
  SeedTag seed_tag;
};

/// Worst-case self-interference powers entering the deterministic problem.
struct RobustBounds {
  double e_bar = 0.0;               // max SI power at the BS
  std::vector<double> g_bar;        // max SI power at MS k (SINR side)
  std::vector<double> g_tilde;      // min SI power at MS k (harvest side)
};

// Stream identifiers; one independent stream per (channel family, user).
enum class Stream : std::uint64_t {
  kDownlink = 0x100,
  kUplink = 0x200,
  kLoopMs = 0x300,
  kLoopBs = 0x400,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Unit-variance circularly symmetric complex Gaussian source.
///
/// The engine is seeded from splitmix64(seed, trial, stream). Box-Muller is
/// done here rather than through std::normal_distribution, whose output is
/// implementation-defined, so draws are identical across standard libraries.
class CscgStream {
 public:
  CscgStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
      : engine_(splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ stream)) {}

  Complex next() {
    // 53-bit uniforms in (0, 1].
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-std::log(u1));  // |z|^2 ~ Exp(1)
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::mt19937_64 engine_;
};

inline ComplexVector draw_vector(const SeedTag& tag, Stream s, std::uint64_t user, int n) {
  CscgStream g(tag.seed, tag.trial_index, static_cast<std::uint64_t>(s) + user);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = g.next();
  return v;
}

}  // namespace detail

/// Draws one realization. Identical (seed, trial_index) give identical draws
/// regardless of call order. Each user's vector is a prefix of its stream, so
/// growing N_t or N_r extends rather than replaces earlier entries.
inline ChannelRealization sample_channels(const SystemParams& params, std::uint64_t trial_index,
                                          std::uint64_t seed) {
  params.validate();
  const int k_users = params.num_users;
  const double si_amp = std::sqrt(params.sic_residual_fraction);
  ChannelRealization ch;
  ch.seed_tag = {seed, trial_index};

  ch.h_dl.reserve(k_users);
  ch.h_ul.reserve(k_users);
  for (int k = 0; k < k_users; ++k) {
    ch.h_dl.push_back(detail::draw_vector(ch.seed_tag, Stream::kDownlink, k, params.num_tx));
    ch.h_ul.push_back(detail::draw_vector(ch.seed_tag, Stream::kUplink, k, params.num_rx));
  }

  detail::CscgStream loop_ms(seed, trial_index, static_cast<std::uint64_t>(Stream::kLoopMs));
  for (int k = 0; k < k_users; ++k) ch.h_si_ms.push_back(si_amp * loop_ms.next());

  // Column j of the BS loop channel comes from its own stream.
  ch.h_si_bs.resize(params.num_rx, params.num_tx);
  for (int j = 0; j < params.num_tx; ++j) {
    ch.h_si_bs.col(j) = si_amp * detail::draw_vector(ch.seed_tag, Stream::kLoopBs, j, params.num_rx);
  }
  return ch;
}

/// Worst-case SI powers with all nodes at full power:
///   g_bar_k   = (|h_si,k| + eps1)^2 P_max
///   g_tilde_k = max(0, |h_si,k| - eps1)^2 P_max
///   e_bar     = (||H_si,bs||_2 + eps2)^2 K P_max
inline RobustBounds compute_bounds(const SystemParams& params, const ChannelRealization& ch) {
  RobustBounds b;
  const auto k_users = ch.h_si_ms.size();
  b.g_bar.resize(k_users);
  b.g_tilde.resize(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    const double mag = std::abs(ch.h_si_ms[k]);
    const double hi = mag + params.eps1;
    const double lo = std::max(0.0, mag - params.eps1);
    b.g_bar[k] = hi * hi * params.p_max;
    b.g_tilde[k] = lo * lo * params.p_max;
  }
  const double hn = linalg::spectral_norm(ch.h_si_bs) + params.eps2;
  b.e_bar = hn * hn * static_cast<double>(params.num_users) * params.p_max;
  return b;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace fdswipt::model
