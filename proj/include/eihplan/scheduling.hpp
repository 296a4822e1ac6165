#pragma once

#include <cmath>
#include <stdexcept>

#include "eihplan/dataflow.hpp"

namespace eihplan {

// Split ratio minimizing completion latency (storage as tiebreak) for fixed
// per-user resources, with the latency and storage values at that split.
struct EtaOptResult {
  double eta = 0.0;
  double latency = 0.0;
  double storage = 0.0;
  int branch = 0;  // 1..6, case order of the closed-form table
};

// Resources of one user, with the data profile; the split eta is free.
struct EtaOptInput {
  double rate_in = 0.0;        // R_u(B_u), bit/s
  double rate_backhaul = 0.0;  // R_u^S
  double cpu_freq = 0.0;       // F_u
  double data = 0.0;
  double intensity = 0.0;
  double output_ratio = 0.0;
};

inline EtaOptResult optimal_eta(const EtaOptInput& in) {
  if (!(in.rate_in > 0.0)) throw std::invalid_argument("optimal_eta: rate_in must be positive");
  if (in.rate_backhaul < 0.0 || in.cpu_freq < 0.0)
    throw std::invalid_argument("optimal_eta: rates must be non-negative");
  if (!(in.data > 0.0 && in.intensity > 0.0))
    throw std::invalid_argument("optimal_eta: data and intensity must be positive");
  if (!(in.output_ratio > 0.0 && in.output_ratio < 1.0))
    throw std::invalid_argument("optimal_eta: output_ratio outside (0,1)");

  const double r = in.rate_in;
  const double rs = in.rate_backhaul;
  const double cpu = in.cpu_freq / in.intensity;  // input-bit rate of the CPU
  const double z = in.output_ratio;
  const double d = in.data;

  EtaOptResult out;
  // First matching case wins; values agree across case boundaries so ties
  // are value-irrelevant.
  if (r < rs) {
    out = {0.0, d / r, 0.0, 1};
  } else if (r < rs / z) {
    if (cpu < (r - rs) / (1.0 - z)) {
      double denom = in.cpu_freq * (1.0 - z) + in.intensity * rs;
      out.eta = in.cpu_freq / denom;
      out.latency = d * in.intensity / denom;
      out.storage = d * (r - rs - (1.0 - z) * cpu) / r;
      out.branch = 2;
    } else {
      out = {(r - rs) / ((1.0 - z) * r), d / r, 0.0, 3};
    }
  } else {
    if (cpu < rs / z) {
      double denom = in.cpu_freq * (1.0 - z) + in.intensity * rs;
      out.eta = in.cpu_freq / denom;
      out.latency = d * in.intensity / denom;
      out.storage = d * (r - rs - (1.0 - z) * cpu) / r;
      out.branch = 4;
    } else if (cpu < r) {
      out = {1.0, z * d / rs, d * (r - rs - (1.0 - z) * cpu) / r, 5};
    } else {
      out = {1.0, z * d / rs, d * (z * r - rs) / r, 6};
    }
  }
  return out;
}

// Dense-grid reference for optimal_eta: evaluates the piecewise pipeline
// functions on {0, step, ..., 1}, minimizing latency with storage as the
// tiebreak. Independent of the closed-form table above.
struct EtaSweepResult {
  double eta = 0.0;
  double latency = 0.0;
  double storage = 0.0;
};

inline EtaSweepResult sweep_eta_oracle(const EtaOptInput& in, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1e-3))
    throw std::invalid_argument("sweep_eta_oracle: grid_step must be in (0, 1e-3]");
  FlowParams p;
  p.rate_in = in.rate_in;
  p.rate_backhaul = in.rate_backhaul;
  p.cpu_freq = in.cpu_freq;
  p.data = in.data;
  p.intensity = in.intensity;
  p.output_ratio = in.output_ratio;
  long n = static_cast<long>(std::ceil(1.0 / grid_step));
  EtaSweepResult best;
  bool first = true;
  for (long i = 0; i <= n; ++i) {
    p.eta = std::min(1.0, static_cast<double>(i) * grid_step);
    DataflowOutcome o = latency_storage_or_inf(p);
    if (first || o.latency < best.latency ||
        (o.latency == best.latency && o.storage < best.storage)) {
      best = {p.eta, o.latency, o.storage};
      first = false;
    }
  }
  return best;
}

}  // namespace eihplan
