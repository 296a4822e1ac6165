#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "eihplan/channel.hpp"
#include "eihplan/scenario.hpp"
#include "eihplan/scheduling.hpp"
#include "eihplan/textio.hpp"

namespace eihplan {

enum class SeSource { approx, mc, exact };

struct SeOptions {
  long mc_samples = 200000;
  std::uint64_t mc_seed = 0x5eed;
};

// Spectral efficiency of every sensor at the given hub location, bit/s/Hz.
inline std::vector<double> spectral_efficiencies(const Scenario& s, const Location& loc,
                                                 SeSource source, const SeOptions& opt = {}) {
  std::vector<double> se;
  se.reserve(s.sensors.size());
  for (const Sensor& u : s.sensors) {
    ChannelState st = channel_state(loc, u, s);
    switch (source) {
      case SeSource::approx: se.push_back(spectral_efficiency_approx(st).spectral_efficiency); break;
      case SeSource::mc:
        se.push_back(spectral_efficiency_mc(st, opt.mc_samples,
                                            Rng::derive(opt.mc_seed, static_cast<std::uint64_t>(u.id)))
                         .spectral_efficiency);
        break;
      case SeSource::exact: se.push_back(spectral_efficiency_exact(st.mean_snr)); break;
    }
  }
  return se;
}

struct BandwidthPlan {
  double total = 0.0;            // Hz
  std::vector<double> per_user;  // Hz
  std::vector<double> se;        // bit/s/Hz actually used
};

namespace detail {

// psd mode: R(B) = B * se(p l^2 / (N0 B)) is strictly increasing and
// saturates at p l^2 / (N0 ln 2); invert by bisection.
inline double invert_rate_psd(double target_rate, double p_l2, double n0, SeSource source) {
  auto rate_of = [&](double b) {
    double gamma = p_l2 / (n0 * b);
    switch (source) {
      case SeSource::approx: return b * spectral_efficiency_from_nu(rate_nu(gamma));
      case SeSource::exact: return b * spectral_efficiency_exact(gamma);
      case SeSource::mc: break;
    }
    throw std::invalid_argument("psd noise model supports se_source approx or exact only");
  };
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (rate_of(lo) > target_rate) {
    lo /= 4.0;
    if (++guard > 600) throw std::runtime_error("psd-mode rate inversion failed to bracket");
  }
  guard = 0;
  while (rate_of(hi) < target_rate) {
    hi *= 4.0;
    if (++guard > 200) throw std::runtime_error("required rate exceeds the psd-mode channel limit");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (rate_of(mid) < target_rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Minimal bandwidth configuration: each user gets exactly the bandwidth that
// makes its rate meet data_volume / latency_req; the total is the sum.
inline BandwidthPlan optimal_bandwidth(const Scenario& s, const Location& loc,
                                       SeSource source = SeSource::approx,
                                       const SeOptions& opt = {}) {
  BandwidthPlan plan;
  plan.se = spectral_efficiencies(s, loc, source, opt);
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    const Sensor& u = s.sensors[i];
    double required = u.data_volume / s.latency_req;  // bit/s
    double b;
    if (s.noise_model == NoiseModel::fixed_power) {
      if (!(plan.se[i] > 0.0))
        throw std::runtime_error("sensor " + std::to_string(u.id) + " unreachable (zero spectral efficiency)");
      b = required / plan.se[i];
    } else {
      ChannelState st = channel_state(loc, u, s);
      double p_l2 = u.tx_power * st.gain * st.gain;
      b = detail::invert_rate_psd(required, p_l2, s.noise_power, source);
      plan.se[i] = required / b;
    }
    plan.per_user.push_back(b);
    plan.total += b;
  }
  return plan;
}

// Per-user backhaul/compute decision: compute before uploading exactly when
// the cycles needed per output bit are cheap relative to backhaul, i.e.
// rho/(1-zeta) <= w_backhaul / w_compute. Independent of the hub location.
struct BackhaulComputePlan {
  double backhaul_total = 0.0;  // bit/s
  double compute_total = 0.0;   // cycle/s
  std::vector<double> backhaul; // per user
  std::vector<double> compute;  // per user
  std::vector<bool> computes;   // branch taken
};

inline bool compute_branch_selected(const Sensor& u, const CostWeights& w) {
  if (w.compute <= 0.0) return true;  // threshold -> infinity
  return u.compute_intensity / (1.0 - u.output_ratio) <= w.backhaul / w.compute;
}

inline BackhaulComputePlan optimal_backhaul_compute(const Scenario& s) {
  BackhaulComputePlan plan;
  for (const Sensor& u : s.sensors) {
    double required = u.data_volume / s.latency_req;
    bool computes = compute_branch_selected(u, s.cost);
    double rs = computes ? u.output_ratio * required : required;
    double f = computes ? u.compute_intensity * required : 0.0;
    plan.backhaul.push_back(rs);
    plan.compute.push_back(f);
    plan.computes.push_back(computes);
    plan.backhaul_total += rs;
    plan.compute_total += f;
  }
  return plan;
}

// Independent check of the threshold rule: solves the separable program by
// endpoint enumeration of each user's feasible backhaul interval
// [zeta*D/T, D/T], with compute tied to the balance identity.
struct LpOracleResult {
  double backhaul_total = 0.0;
  double compute_total = 0.0;
  std::vector<double> backhaul;
  std::vector<bool> tie;  // both endpoints cost-equal
};

inline LpOracleResult lp_oracle_p5(const Scenario& s) {
  LpOracleResult res;
  for (const Sensor& u : s.sensors) {
    double required = u.data_volume / s.latency_req;
    double lo = u.output_ratio * required;   // full compute
    double hi = required;                    // full upload
    auto cost_at = [&](double rs) {
      double f = u.compute_intensity * (required - rs) / (1.0 - u.output_ratio);
      return s.cost.backhaul * rs + s.cost.compute * f;
    };
    double c_lo = cost_at(lo), c_hi = cost_at(hi);
    bool tie = std::fabs(c_lo - c_hi) <= 1e-12 * std::max(std::fabs(c_lo), std::fabs(c_hi));
    double rs = (c_lo <= c_hi) ? lo : hi;
    double f = u.compute_intensity * (required - rs) / (1.0 - u.output_ratio);
    res.backhaul.push_back(rs);
    res.tie.push_back(tie);
    res.backhaul_total += rs;
    res.compute_total += f;
  }
  return res;
}

// Fully assembled optimal configuration at a fixed location.
struct OptimalConfig {
  ResourceConfig config;
  std::vector<PerUserAllocation> per_user;
  std::vector<double> se_per_user;  // bit/s/Hz
};

// All original-problem constraints, checked at an assembled configuration.
inline std::vector<std::string> check_feasibility(const Scenario& s, const OptimalConfig& c,
                                                  double rel_tol = 1e-9) {
  std::vector<std::string> bad;
  double sum_b = 0.0, sum_rs = 0.0, sum_f = 0.0, sum_v = 0.0, total_data = 0.0;
  for (const Sensor& u : s.sensors) total_data += u.data_volume;
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    const Sensor& u = s.sensors[i];
    const PerUserAllocation& a = c.per_user[i];
    if (a.bandwidth < 0.0 || a.backhaul_rate < 0.0 || a.cpu_freq < 0.0)
      bad.push_back("user " + std::to_string(u.id) + ": negative allocation");
    if (a.eta < -rel_tol || a.eta > 1.0 + rel_tol)
      bad.push_back("user " + std::to_string(u.id) + ": eta outside [0,1]");
    FlowParams p{a.bandwidth * c.se_per_user[i], a.backhaul_rate, a.cpu_freq,
                 std::min(std::max(a.eta, 0.0), 1.0), u.data_volume,
                 u.compute_intensity, u.output_ratio};
    DataflowOutcome o = latency_storage_or_inf(p);
    if (!(o.latency <= s.latency_req * (1.0 + rel_tol)))
      bad.push_back("user " + std::to_string(u.id) + ": latency above requirement");
    sum_v += o.storage;
    sum_b += a.bandwidth;
    sum_rs += a.backhaul_rate;
    sum_f += a.cpu_freq;
  }
  if (sum_b > c.config.bandwidth_total * (1.0 + rel_tol) + 1e-12)
    bad.push_back("bandwidth allocations exceed the configured total");
  if (sum_rs > c.config.backhaul_total * (1.0 + rel_tol) + 1e-12)
    bad.push_back("backhaul allocations exceed the configured total");
  if (sum_f > c.config.compute_total * (1.0 + rel_tol) + 1e-12)
    bad.push_back("compute allocations exceed the configured total");
  if (sum_v > c.config.storage_total + rel_tol * std::max(1.0, total_data))
    bad.push_back("storage demand exceeds the configured total");
  return bad;
}

inline OptimalConfig full_configuration(const Scenario& s, const Location& loc,
                                        SeSource source = SeSource::approx,
                                        const SeOptions& opt = {}) {
  BandwidthPlan bw = optimal_bandwidth(s, loc, source, opt);
  BackhaulComputePlan bc = optimal_backhaul_compute(s);
  OptimalConfig out;
  out.se_per_user = bw.se;
  out.config.bandwidth_total = bw.total;
  out.config.backhaul_total = bc.backhaul_total;
  out.config.compute_total = bc.compute_total;
  out.config.storage_total = 0.0;  // flows balance at the optimum
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    const Sensor& u = s.sensors[i];
    PerUserAllocation a;
    a.bandwidth = bw.per_user[i];
    a.backhaul_rate = bc.backhaul[i];
    a.cpu_freq = bc.compute[i];
    EtaOptInput in{a.bandwidth * bw.se[i], a.backhaul_rate, a.cpu_freq,
                   u.data_volume, u.compute_intensity, u.output_ratio};
    a.eta = optimal_eta(in).eta;
    out.per_user.push_back(a);
  }
  out.config.cost = config_cost(out.config, s.cost);
  std::vector<std::string> bad = check_feasibility(s, out);
  if (!bad.empty())
    throw std::logic_error("full_configuration produced an infeasible point: " + bad.front());
  return out;
}

// ---------------------------------------------------------------------------
// Normalization of a feasible orchestration onto the balanced subspace
// (backhaul <= rate <= backhaul/zeta with compute tied to the deficit).
// Componentwise never increases any allocation.

struct UserTriple {
  double bandwidth = 0.0;
  double backhaul = 0.0;
  double cpu_freq = 0.0;
};

inline UserTriple normalize_user(const UserTriple& in, const Sensor& u, double se) {
  if (!(se > 0.0)) throw std::invalid_argument("normalize_user: spectral efficiency must be positive");
  const double z = u.output_ratio;
  const double rho = u.compute_intensity;
  double r = in.bandwidth * se;
  double cpu = in.cpu_freq / rho;
  auto inv_rate = [se](double rate) { return rate / se; };
  UserTriple out;
  if (r < in.backhaul) {
    out = {in.bandwidth, r, 0.0};
  } else if (r < in.backhaul / z) {
    if (cpu < (r - in.backhaul) / (1.0 - z)) {
      out = {inv_rate(in.backhaul + (1.0 - z) * cpu), in.backhaul, in.cpu_freq};
    } else {
      out = {in.bandwidth, in.backhaul, rho * (r - in.backhaul) / (1.0 - z)};
    }
  } else {
    if (cpu < in.backhaul / z) {
      out = {inv_rate(in.backhaul + (1.0 - z) * cpu), in.backhaul, in.cpu_freq};
    } else {
      out = {inv_rate(in.backhaul / z), in.backhaul, rho * in.backhaul / z};
    }
  }
  return out;
}

// Whole-scenario wrapper; preconditions: each input triple keeps the user's
// split-optimized latency within the requirement.
inline std::vector<UserTriple> normalize_solution(const Scenario& s,
                                                  const std::vector<UserTriple>& in,
                                                  const std::vector<double>& se) {
  if (in.size() != s.sensors.size() || se.size() != s.sensors.size())
    throw std::invalid_argument("normalize_solution: size mismatch");
  std::vector<UserTriple> out;
  out.reserve(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    const Sensor& u = s.sensors[i];
    EtaOptInput chk{in[i].bandwidth * se[i], in[i].backhaul, in[i].cpu_freq,
                    u.data_volume, u.compute_intensity, u.output_ratio};
    if (!(optimal_eta(chk).latency <= s.latency_req * (1.0 + 1e-9)))
      throw std::invalid_argument("normalize_solution: input violates the latency requirement");
    out.push_back(normalize_user(in[i], u, se[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report export

inline std::string config_report_text(const Scenario& s, const OptimalConfig& c) {
  std::string out;
  out += "resource configuration\n";
  out += "  bandwidth_total  = " + num(c.config.bandwidth_total / kMHz) + " MHz\n";
  out += "  backhaul_total   = " + num(c.config.backhaul_total / kMbit) + " Mbit/s\n";
  out += "  compute_total    = " + num(c.config.compute_total / kMcycle) + " Mcycle/s\n";
  out += "  storage_total    = " + num(c.config.storage_total / kMbit) + " Mbit\n";
  out += "cost breakdown\n";
  out += "  bandwidth        = " + num(s.cost.bandwidth * c.config.bandwidth_total) + "\n";
  out += "  backhaul         = " + num(s.cost.backhaul * c.config.backhaul_total) + "\n";
  out += "  compute          = " + num(s.cost.compute * c.config.compute_total) + "\n";
  out += "  storage          = " + num(s.cost.storage * c.config.storage_total) + "\n";
  out += "  total            = " + num(c.config.cost) + "\n";
  return out;
}

inline std::string config_report_csv(const Scenario& s, const OptimalConfig& c) {
  CsvWriter csv({"sensor_id", "bandwidth_hz", "spectral_efficiency", "backhaul_bit_s",
                 "compute_cycle_s", "eta"});
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    csv.row({static_cast<double>(s.sensors[i].id), c.per_user[i].bandwidth, c.se_per_user[i],
             c.per_user[i].backhaul_rate, c.per_user[i].cpu_freq, c.per_user[i].eta});
  }
  return csv.str();
}

}  // namespace eihplan
