#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "eihplan/textio.hpp"

namespace eihplan {

// Per-user data-flow parameters during the upload window. All rates are
// instantaneous fluid rates; eta is the fraction of arriving data routed
// through the compute stage.
struct FlowParams {
  double rate_in = 0.0;        // user->hub rate R_u, bit/s
  double rate_backhaul = 0.0;  // hub->satellite rate R_u^S, bit/s
  double cpu_freq = 0.0;       // F_u, cycle/s
  double eta = 0.0;
  double data = 0.0;           // D_u, bits
  double intensity = 0.0;      // rho_u, cycle/bit
  double output_ratio = 0.0;   // zeta_u
};

struct DataflowOutcome {
  double latency = 0.0;   // completion time of the whole upload, s
  double storage = 0.0;   // peak combined occupancy of both queues, bits
  int branch = 0;         // 1..5, matching the piecewise-case order
};

struct FluidEvent {
  double time = 0.0;
  double q_compute = 0.0;  // bits waiting for the CPU
  double q_upload = 0.0;   // bits waiting for the satellite link
};

struct FluidTrace {
  std::vector<FluidEvent> events;
  double peak_compute = 0.0;
  double peak_upload = 0.0;
  double uploaded_total = 0.0;
};

struct FluidResult {
  DataflowOutcome outcome;
  FluidTrace trace;
  bool completes = true;
};

namespace detail {

inline void check_flow_params(const FlowParams& p) {
  if (!(p.rate_in > 0.0)) throw std::invalid_argument("dataflow: rate_in must be positive");
  if (p.rate_backhaul < 0.0 || p.cpu_freq < 0.0)
    throw std::invalid_argument("dataflow: rates must be non-negative");
  if (!(p.eta >= 0.0 && p.eta <= 1.0)) throw std::invalid_argument("dataflow: eta outside [0,1]");
  if (!(p.data > 0.0 && p.intensity > 0.0))
    throw std::invalid_argument("dataflow: data and intensity must be positive");
  if (!(p.output_ratio > 0.0 && p.output_ratio < 1.0))
    throw std::invalid_argument("dataflow: output_ratio outside (0,1)");
}

// Case index 1..5. The compute stage is vacuous when eta = 0 and F = 0;
// that combination is routed through cases 4/5, whose values are the correct
// no-compute limits.
inline int classify_branch(const FlowParams& p) {
  double mix = p.output_ratio * p.eta + 1.0 - p.eta;  // output bits per input bit
  double cpu_rate = (p.eta == 0.0 && p.cpu_freq == 0.0)
                        ? std::numeric_limits<double>::infinity()
                        : p.cpu_freq / p.intensity;
  if (p.eta * p.rate_in >= cpu_rate) {
    if (p.output_ratio * cpu_rate + (1.0 - p.eta) * p.rate_in >= p.rate_backhaul) {
      return (cpu_rate >= p.eta * p.rate_backhaul / mix) ? 1 : 2;
    }
    return 3;
  }
  return (mix * p.rate_in >= p.rate_backhaul) ? 4 : 5;
}

}  // namespace detail

// Analytic completion latency and minimum storage of the concurrent
// receive/compute/upload pipeline.
inline DataflowOutcome latency_storage(const FlowParams& p) {
  detail::check_flow_params(p);
  double mix = p.output_ratio * p.eta + 1.0 - p.eta;
  double cpu_rate = p.cpu_freq / p.intensity;
  DataflowOutcome out;
  out.branch = detail::classify_branch(p);
  switch (out.branch) {
    case 1:
      if (p.rate_backhaul == 0.0)
        throw std::invalid_argument("dataflow: backhaul rate is zero but upload is required");
      out.latency = p.data * mix / p.rate_backhaul;
      out.storage = p.data * (p.rate_in - p.rate_backhaul - (1.0 - p.output_ratio) * cpu_rate) /
                    p.rate_in;
      break;
    case 2:
    case 3:
      if (p.cpu_freq == 0.0)
        throw std::invalid_argument("dataflow: cpu_freq is zero but data is routed to compute");
      out.latency = p.eta * p.data * p.intensity / p.cpu_freq;
      out.storage = (out.branch == 2)
                        ? p.data * (p.rate_in - p.rate_backhaul - (1.0 - p.output_ratio) * cpu_rate) /
                              p.rate_in
                        : p.data * (p.eta * p.rate_in - cpu_rate) / p.rate_in;
      break;
    case 4:
      if (p.rate_backhaul == 0.0)
        throw std::invalid_argument("dataflow: backhaul rate is zero but upload is required");
      out.latency = p.data * mix / p.rate_backhaul;
      out.storage = p.data * (mix * p.rate_in - p.rate_backhaul) / p.rate_in;
      break;
    case 5:
      out.latency = p.data / p.rate_in;
      out.storage = 0.0;
      break;
  }
  return out;
}

// Same interface but never throws for zero-divisor branches; reports an
// infinite latency instead. Convenience for sweep-style callers.
inline DataflowOutcome latency_storage_or_inf(const FlowParams& p) {
  detail::check_flow_params(p);
  double mix = p.output_ratio * p.eta + 1.0 - p.eta;
  bool upload_starved = p.rate_backhaul == 0.0;
  bool compute_starved = p.eta > 0.0 && p.cpu_freq == 0.0;
  if (upload_starved || compute_starved) {
    DataflowOutcome out;
    out.branch = detail::classify_branch(p);
    out.latency = std::numeric_limits<double>::infinity();
    out.storage = p.data * mix;  // everything eventually parks in storage
    return out;
  }
  return latency_storage(p);
}

// Exact event-driven simulation of the Fig.-style two-queue fluid pipeline.
// Queue drains are work-conserving: a server never pulls more than what is
// present plus what arrives. Event times are closed-form per linear phase;
// there is no time discretization.
inline FluidResult simulate_fluid(const FlowParams& p) {
  detail::check_flow_params(p);
  FluidResult res;
  res.outcome.branch = detail::classify_branch(p);

  const double mix = p.output_ratio * p.eta + 1.0 - p.eta;
  const double target = p.data * mix;  // bits that must leave via the satellite
  const double t_arrival = p.data / p.rate_in;
  const double cpu_rate = p.cpu_freq / p.intensity;

  if (p.rate_backhaul == 0.0 || (p.eta > 0.0 && p.cpu_freq == 0.0)) {
    res.completes = false;
    res.outcome.latency = std::numeric_limits<double>::infinity();
    res.outcome.storage = target;
    return res;
  }

  double t = 0.0, qc = 0.0, qu = 0.0, uploaded = 0.0;
  double peak = 0.0;
  auto record = [&res, &qc, &qu, &t] {
    res.trace.events.push_back({t, qc, qu});
    res.trace.peak_compute = std::max(res.trace.peak_compute, qc);
    res.trace.peak_upload = std::max(res.trace.peak_upload, qu);
  };
  record();

  const double inf = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 64; ++iter) {
    bool arriving = t < t_arrival;
    double in_c = arriving ? p.eta * p.rate_in : 0.0;
    double in_u_raw = arriving ? (1.0 - p.eta) * p.rate_in : 0.0;
    double drain_c = qc > 0.0 ? cpu_rate : std::min(cpu_rate, in_c);
    double in_u = in_u_raw + p.output_ratio * drain_c;
    double drain_u = qu > 0.0 ? p.rate_backhaul : std::min(p.rate_backhaul, in_u);
    double slope_c = in_c - drain_c;
    double slope_u = in_u - drain_u;

    double dt_arr = arriving ? t_arrival - t : inf;
    double dt_qc = (qc > 0.0 && slope_c < 0.0) ? qc / -slope_c : inf;
    double dt_qu = (qu > 0.0 && slope_u < 0.0) ? qu / -slope_u : inf;
    double dt_done = drain_u > 0.0 ? std::max(target - uploaded, 0.0) / drain_u : inf;
    double dt = std::min(std::min(dt_arr, dt_qc), std::min(dt_qu, dt_done));
    if (!(dt < inf)) {
      if (target - uploaded <= 1e-9 * target) {  // rounding residue only
        res.outcome.latency = t;
        res.outcome.storage = peak;
        res.trace.uploaded_total = target;
        return res;
      }
      res.completes = false;  // no progress possible
      res.outcome.latency = inf;
      res.outcome.storage = peak;
      return res;
    }
    dt = std::max(dt, 0.0);

    t += dt;
    uploaded += drain_u * dt;
    qc = (dt >= dt_qc) ? 0.0 : qc + slope_c * dt;
    qu = (dt >= dt_qu) ? 0.0 : qu + slope_u * dt;
    if (dt == dt_arr) t = t_arrival;
    record();
    peak = std::max(peak, qc + qu);

    // Completion ties with a queue-empty or arrival event in exact
    // arithmetic; compare with a relative tolerance so rounding cannot
    // strand an empty system one ulp short of the target.
    if (dt_done <= dt * (1.0 + 1e-12) + 1e-300) {
      res.outcome.latency = t;
      res.outcome.storage = peak;
      res.trace.uploaded_total = target;
      return res;
    }
  }
  throw std::logic_error("simulate_fluid: event cap exceeded");
}

inline std::string fluid_trace_csv(const FluidTrace& trace) {
  CsvWriter csv({"event_time", "q_compute_bits", "q_upload_bits"});
  for (const FluidEvent& e : trace.events) csv.row({e.time, e.q_compute, e.q_upload});
  return csv.str();
}

}  // namespace eihplan
