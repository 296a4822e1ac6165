#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "eihplan/config_opt.hpp"
#include "eihplan/parallel.hpp"
#include "eihplan/placement.hpp"
#include "eihplan/textio.hpp"

namespace eihplan {

// ---------------------------------------------------------------------------
// Scheme 1: joint optimum under a sequential receive -> compute -> upload
// pipeline. Per user with the split fixed, the stage allocation follows the
// Cauchy-Schwarz stationarity (times proportional to sqrt(weight * work)),
// so the cost is (sum_i sqrt(a_i c_i))^2 / T; the split is swept on a grid.

inline OptimalConfig scheme1_config(const Scenario& s, const Location& loc,
                                    SeSource source = SeSource::approx) {
  if (!(s.cost.bandwidth > 0.0 && s.cost.backhaul > 0.0 && s.cost.compute > 0.0))
    throw std::invalid_argument("scheme1_config: needs positive bandwidth/backhaul/compute weights");
  if (s.noise_model != NoiseModel::fixed_power)
    throw std::invalid_argument("scheme1_config needs the fixed_power noise model");
  std::vector<double> se = spectral_efficiencies(s, loc, source);
  OptimalConfig out;
  out.se_per_user = se;
  const double T = s.latency_req;
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    const Sensor& u = s.sensors[i];
    double best_cost = std::numeric_limits<double>::infinity();
    PerUserAllocation best;
    const double c1 = u.data_volume / se[i];
    for (int k = 0; k <= 1000; ++k) {
      double eta = k / 1000.0;
      double c2 = eta * u.data_volume * u.compute_intensity;
      double c3 = (u.output_ratio * eta + 1.0 - eta) * u.data_volume;
      double sroot = std::sqrt(s.cost.bandwidth * c1) + std::sqrt(s.cost.backhaul * c3);
      if (c2 > 0.0) sroot += std::sqrt(s.cost.compute * c2);
      double cost = sroot * sroot / T;
      if (cost < best_cost) {
        best_cost = cost;
        double lam_rt = sroot / T;  // sqrt of the constraint multiplier
        best.bandwidth = lam_rt * std::sqrt(c1 / s.cost.bandwidth);
        best.backhaul_rate = lam_rt * std::sqrt(c3 / s.cost.backhaul);
        best.cpu_freq = c2 > 0.0 ? lam_rt * std::sqrt(c2 / s.cost.compute) : 0.0;
        best.eta = eta;
      }
    }
    out.per_user.push_back(best);
    out.config.bandwidth_total += best.bandwidth;
    out.config.backhaul_total += best.backhaul_rate;
    out.config.compute_total += best.cpu_freq;
    out.config.storage_total += u.data_volume;  // full buffering between stages
  }
  out.config.cost = config_cost(out.config, s.cost);
  return out;
}

// ---------------------------------------------------------------------------
// Scheme 2: every user receives an equal share of each total. The bandwidth
// total is set by the neediest user; backhaul and compute totals are
// minimized by a golden-section scan over the backhaul total with an inner
// bisection for the smallest feasible compute total.

namespace detail {

struct EqualShareContext {
  const Scenario* s = nullptr;
  std::vector<double> rate;  // per-user link rate at the equal bandwidth share
};

inline bool equal_share_feasible(const EqualShareContext& ctx, double rs_total, double f_total) {
  size_t n = ctx.s->sensors.size();
  for (size_t i = 0; i < n; ++i) {
    const Sensor& u = ctx.s->sensors[i];
    EtaOptInput in{ctx.rate[i], rs_total / static_cast<double>(n),
                   f_total / static_cast<double>(n), u.data_volume, u.compute_intensity,
                   u.output_ratio};
    if (!(optimal_eta(in).latency <= ctx.s->latency_req * (1.0 + 1e-12))) return false;
  }
  return true;
}

inline double equal_share_min_f(const EqualShareContext& ctx, double rs_total, double f_cap) {
  if (!equal_share_feasible(ctx, rs_total, f_cap))
    return std::numeric_limits<double>::infinity();
  if (equal_share_feasible(ctx, rs_total, 0.0)) return 0.0;
  double lo = 0.0, hi = f_cap;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (equal_share_feasible(ctx, rs_total, mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace detail

inline OptimalConfig scheme2_config(const Scenario& s, const Location& loc,
                                    SeSource source = SeSource::approx) {
  if (s.noise_model != NoiseModel::fixed_power)
    throw std::invalid_argument("scheme2_config needs the fixed_power noise model");
  BandwidthPlan bw = optimal_bandwidth(s, loc, source);
  const size_t n = s.sensors.size();
  const double nn = static_cast<double>(n);
  double b_each = *std::max_element(bw.per_user.begin(), bw.per_user.end());

  detail::EqualShareContext ctx;
  ctx.s = &s;
  for (size_t i = 0; i < n; ++i) ctx.rate.push_back(b_each * bw.se[i]);

  double rs_lo = 0.0, rs_hi = 0.0, f_cap = 1.0;
  for (size_t i = 0; i < n; ++i) {
    const Sensor& u = s.sensors[i];
    double required = u.data_volume / s.latency_req;
    rs_lo = std::max(rs_lo, nn * u.output_ratio * required);
    rs_hi = std::max(rs_hi, nn * required);
    f_cap = std::max(f_cap, 2.0 * nn * u.compute_intensity * required / (1.0 - u.output_ratio));
  }

  auto objective = [&](double rs) {
    return s.cost.backhaul * rs + s.cost.compute * detail::equal_share_min_f(ctx, rs, f_cap);
  };

  // golden-section scan (objective is convex piecewise linear in rs)
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = rs_lo, b = rs_hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int i = 0; i < 90; ++i) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = objective(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = objective(x2);
    }
  }
  double best_rs = 0.5 * (a + b);
  double best_obj = objective(best_rs);

  // polish with the kink candidates of the inner piecewise-linear surface
  std::vector<double> candidates{rs_lo, rs_hi};
  for (size_t i = 0; i < n; ++i) {
    candidates.push_back(nn * s.sensors[i].data_volume / s.latency_req);
    for (size_t j = i + 1; j < n; ++j) {
      double ci = s.sensors[i].compute_intensity / (1.0 - s.sensors[i].output_ratio);
      double cj = s.sensors[j].compute_intensity / (1.0 - s.sensors[j].output_ratio);
      double ri = s.sensors[i].data_volume / s.latency_req;
      double rj = s.sensors[j].data_volume / s.latency_req;
      if (ci != cj) {
        double x = (ci * ri - cj * rj) / (ci - cj);
        if (x > 0.0) candidates.push_back(nn * x);
      }
    }
  }
  for (double cand : candidates) {
    if (cand < rs_lo || cand > rs_hi) continue;
    double obj = objective(cand);
    if (obj < best_obj) {
      best_obj = obj;
      best_rs = cand;
    }
  }

  double best_f = detail::equal_share_min_f(ctx, best_rs, f_cap);
  OptimalConfig out;
  out.se_per_user = bw.se;
  out.config.bandwidth_total = nn * b_each;
  out.config.backhaul_total = best_rs;
  out.config.compute_total = best_f;
  for (size_t i = 0; i < n; ++i) {
    const Sensor& u = s.sensors[i];
    PerUserAllocation a_u;
    a_u.bandwidth = b_each;
    a_u.backhaul_rate = best_rs / nn;
    a_u.cpu_freq = best_f / nn;
    EtaOptInput in{ctx.rate[i], a_u.backhaul_rate, a_u.cpu_freq, u.data_volume,
                   u.compute_intensity, u.output_ratio};
    EtaOptResult r = optimal_eta(in);
    a_u.eta = r.eta;
    out.config.storage_total += r.storage;
    out.per_user.push_back(a_u);
  }
  out.config.cost = config_cost(out.config, s.cost);
  return out;
}

// ---------------------------------------------------------------------------
// Completion-time surface over configured (backhaul, compute) totals at a
// fixed bandwidth total. Per-user shares follow each user's standalone
// requirement; splits are re-optimized per node. Bench-only convention.

struct Grid1D {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  double at(int i) const {
    return n > 1 ? lo + (hi - lo) * static_cast<double>(i) / (n - 1) : lo;
  }
  double step() const { return n > 1 ? (hi - lo) / (n - 1) : 0.0; }
};

struct LatencySurface {
  Grid1D rs_grid, f_grid;
  std::vector<double> time;    // row-major, [i_rs * f_grid.n + i_f]
  std::vector<char> meets;     // <= latency_req
  double at(int i_rs, int i_f) const { return time[static_cast<size_t>(i_rs) * f_grid.n + i_f]; }
};

// Proportional share weights derived from the closed-form optimum.
struct ShareWeights {
  std::vector<double> bandwidth, backhaul, compute;
};

inline ShareWeights share_weights(const Scenario& s, const BandwidthPlan& bw,
                                  const BackhaulComputePlan& bc) {
  ShareWeights w;
  size_t n = s.sensors.size();
  for (size_t i = 0; i < n; ++i) {
    w.bandwidth.push_back(bw.per_user[i] / bw.total);
    w.backhaul.push_back(bc.backhaul[i] / bc.backhaul_total);
    w.compute.push_back(bc.compute_total > 0.0 ? bc.compute[i] / bc.compute_total
                                               : 1.0 / static_cast<double>(n));
  }
  return w;
}

inline LatencySurface latency_surface(const Scenario& s, const Location& loc, double b_total,
                                      const Grid1D& rs_grid, const Grid1D& f_grid,
                                      int jobs = 1) {
  if (rs_grid.n < 1 || f_grid.n < 1)
    throw std::invalid_argument("latency_surface: grids must be non-empty");
  if (s.noise_model != NoiseModel::fixed_power)
    throw std::invalid_argument("latency_surface needs the fixed_power noise model");
  BandwidthPlan bw = optimal_bandwidth(s, loc);
  BackhaulComputePlan bc = optimal_backhaul_compute(s);
  ShareWeights w = share_weights(s, bw, bc);
  LatencySurface out;
  out.rs_grid = rs_grid;
  out.f_grid = f_grid;
  out.time.resize(static_cast<size_t>(rs_grid.n) * f_grid.n);
  out.meets.resize(out.time.size());
  parallel_for(static_cast<size_t>(rs_grid.n), jobs, [&](size_t ir) {
    double rs_total = rs_grid.at(static_cast<int>(ir));
    for (int jf = 0; jf < f_grid.n; ++jf) {
      double f_total = f_grid.at(jf);
      double worst = 0.0;
      for (size_t i = 0; i < s.sensors.size(); ++i) {
        const Sensor& u = s.sensors[i];
        EtaOptInput in{b_total * w.bandwidth[i] * bw.se[i], rs_total * w.backhaul[i],
                       f_total * w.compute[i], u.data_volume, u.compute_intensity,
                       u.output_ratio};
        worst = std::max(worst, optimal_eta(in).latency);
      }
      out.time[ir * f_grid.n + jf] = worst;
      out.meets[ir * f_grid.n + jf] = worst <= s.latency_req * (1.0 + 1e-12) ? 1 : 0;
    }
  });
  return out;
}

inline std::string latency_surface_csv(const LatencySurface& surf) {
  CsvWriter csv({"rs_total_bit_s", "f_total_cycle_s", "time_s", "meets_deadline"});
  for (int ir = 0; ir < surf.rs_grid.n; ++ir)
    for (int jf = 0; jf < surf.f_grid.n; ++jf)
      csv.row({surf.rs_grid.at(ir), surf.f_grid.at(jf), surf.at(ir, jf),
               static_cast<double>(surf.meets[static_cast<size_t>(ir) * surf.f_grid.n + jf])});
  return csv.str();
}

// ---------------------------------------------------------------------------
// Feasibility oracle over totals at the optimal bandwidth: splits are chosen
// greedily (compute goes first to the users where a cycle saves the most
// backhaul), then audited with the split-optimized latency. Independent of
// the threshold closed form.

namespace detail {

struct TotalsOracle {
  const Scenario* s = nullptr;
  std::vector<double> required;    // D/T per user
  std::vector<size_t> by_cycle_cost;  // ascending rho/(1-zeta)

  static TotalsOracle from(const Scenario& s) {
    TotalsOracle o;
    o.s = &s;
    for (const Sensor& u : s.sensors) o.required.push_back(u.data_volume / s.latency_req);
    o.by_cycle_cost.resize(s.sensors.size());
    std::iota(o.by_cycle_cost.begin(), o.by_cycle_cost.end(), size_t{0});
    std::stable_sort(o.by_cycle_cost.begin(), o.by_cycle_cost.end(), [&](size_t a, size_t b) {
      double ca = s.sensors[a].compute_intensity / (1.0 - s.sensors[a].output_ratio);
      double cb = s.sensors[b].compute_intensity / (1.0 - s.sensors[b].output_ratio);
      return ca < cb;
    });
    return o;
  }

  // smallest backhaul total that completes in time with compute total f
  double min_rs(double f_total) const {
    double budget = f_total, total = 0.0;
    std::vector<double> fu(required.size(), 0.0);
    for (size_t idx : by_cycle_cost) {
      double cap = s->sensors[idx].compute_intensity * required[idx];
      double take = std::min(cap, budget);
      fu[idx] = take;
      budget -= take;
    }
    for (size_t i = 0; i < required.size(); ++i) {
      const Sensor& u = s->sensors[i];
      double saved = (1.0 - u.output_ratio) * fu[i] / u.compute_intensity;
      total += std::max(u.output_ratio * required[i], required[i] - saved);
    }
    return total;
  }

  // smallest compute total that completes in time with backhaul total rs
  double min_f(double rs_total) const {
    double floor_sum = 0.0;
    for (size_t i = 0; i < required.size(); ++i)
      floor_sum += s->sensors[i].output_ratio * required[i];
    if (rs_total < floor_sum) return std::numeric_limits<double>::infinity();
    double budget = rs_total - floor_sum, total = 0.0;
    std::vector<double> rsu(required.size());
    for (size_t i = 0; i < required.size(); ++i)
      rsu[i] = s->sensors[i].output_ratio * required[i];
    for (auto it = by_cycle_cost.rbegin(); it != by_cycle_cost.rend(); ++it) {
      size_t idx = *it;
      double cap = (1.0 - s->sensors[idx].output_ratio) * required[idx];
      double take = std::min(cap, budget);
      rsu[idx] += take;
      budget -= take;
    }
    for (size_t i = 0; i < required.size(); ++i) {
      const Sensor& u = s->sensors[i];
      if (rsu[i] < required[i])
        total += u.compute_intensity * (required[i] - rsu[i]) / (1.0 - u.output_ratio);
    }
    return total;
  }

  bool feasible(double rs_total, double f_total) const { return min_rs(f_total) <= rs_total * (1.0 + 1e-12); }
};

}  // namespace detail

enum class SweepResource { compute_total, backhaul_total };

struct CostCurvePoint {
  double swept = 0.0;       // the swept resource value
  double complement = 0.0;  // minimal feasible complementary resource
  double cost = 0.0;
};

struct CostCurve {
  SweepResource swept = SweepResource::compute_total;
  std::vector<CostCurvePoint> points;
  int argmin = 0;
  double optimum_swept = 0.0;  // the closed-form value of the swept resource
};

inline CostCurve cost_curve_with_oracle(const Scenario& s, const Location& loc,
                                        SweepResource swept, const Grid1D& grid) {
  if (grid.n < 2) throw std::invalid_argument("cost_curve_with_oracle: need at least two samples");
  if (s.noise_model != NoiseModel::fixed_power)
    throw std::invalid_argument("cost_curve_with_oracle needs the fixed_power noise model");
  BandwidthPlan bw = optimal_bandwidth(s, loc);
  BackhaulComputePlan bc = optimal_backhaul_compute(s);
  detail::TotalsOracle oracle = detail::TotalsOracle::from(s);
  double base = s.cost.bandwidth * bw.total;
  double rs_cap = 0.0;
  for (double r : oracle.required) rs_cap += r;
  CostCurve curve;
  curve.swept = swept;
  curve.optimum_swept =
      (swept == SweepResource::compute_total) ? bc.compute_total : bc.backhaul_total;
  for (int i = 0; i < grid.n; ++i) {
    CostCurvePoint pt;
    pt.swept = grid.at(i);
    if (swept == SweepResource::compute_total) {
      // binary search the smallest feasible backhaul total
      double lo = 0.0, hi = rs_cap;
      if (!oracle.feasible(hi, pt.swept)) {
        pt.complement = std::numeric_limits<double>::infinity();
      } else {
        for (int it = 0; it < 80; ++it) {
          double mid = 0.5 * (lo + hi);
          (oracle.feasible(mid, pt.swept) ? hi : lo) = mid;
        }
        pt.complement = hi;
      }
      pt.cost = base + s.cost.backhaul * pt.complement + s.cost.compute * pt.swept;
    } else {
      double f_cap = 1.0;
      for (size_t u = 0; u < s.sensors.size(); ++u)
        f_cap += s.sensors[u].compute_intensity * oracle.required[u];
      double lo = 0.0, hi = f_cap;
      auto f_feasible = [&](double f) { return oracle.feasible(pt.swept, f); };
      if (!f_feasible(hi)) {
        pt.complement = std::numeric_limits<double>::infinity();
      } else if (f_feasible(0.0)) {
        pt.complement = 0.0;
      } else {
        for (int it = 0; it < 80; ++it) {
          double mid = 0.5 * (lo + hi);
          (f_feasible(mid) ? hi : lo) = mid;
        }
        pt.complement = hi;
      }
      pt.cost = base + s.cost.backhaul * pt.swept + s.cost.compute * pt.complement;
    }
    curve.points.push_back(pt);
    if (pt.cost < curve.points[curve.argmin].cost) curve.argmin = i;
  }
  return curve;
}

inline std::string cost_curve_csv(const CostCurve& c) {
  CsvWriter csv({c.swept == SweepResource::compute_total ? "f_total_cycle_s" : "rs_total_bit_s",
                 c.swept == SweepResource::compute_total ? "min_rs_total_bit_s"
                                                         : "min_f_total_cycle_s",
                 "cost"});
  for (const CostCurvePoint& p : c.points) csv.row({p.swept, p.complement, p.cost});
  return csv.str();
}

// ---------------------------------------------------------------------------
// Experiment runner.

struct ExperimentParams {
  int n_seeds = 50;
  std::uint64_t seed0 = 1;
  int dmax_points = 10;      // log-spaced 1e6..1e8 sweep
  int n_users = 5;
  Location loc{0.0, 0.0};
  int surface_n = 100;       // nodes per surface axis
  double grid_res = 25.0;    // m, fig7 surfaces
  double sca_eps = 1e-4;
  int jobs = 1;
};

struct ExperimentReport {
  std::string id;
  std::vector<std::string> files;
  std::vector<std::string> summary;
};

namespace detail {

inline std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

}  // namespace detail

inline ExperimentReport run_experiment(const std::string& id, const Scenario& base,
                                       const ExperimentParams& prm, const std::string& out_dir) {
  ExperimentReport rep;
  rep.id = id;
  auto emit = [&](const std::string& name, const std::string& content) {
    std::string path = detail::join_path(out_dir, name);
    write_file(path, content);
    rep.files.push_back(path);
  };

  if (id == "fig3") {
    // cost of the three schemes across data volumes, storage unpriced
    CsvWriter pts({"seed", "dmax_bit", "cost_proposed", "cost_scheme1", "cost_scheme2"});
    std::vector<double> mean_p(prm.dmax_points, 0.0), mean_s1(prm.dmax_points, 0.0),
        mean_s2(prm.dmax_points, 0.0);
    for (int k = 0; k < prm.n_seeds; ++k) {
      std::uint64_t seed = prm.seed0 + static_cast<std::uint64_t>(k);
      for (int d = 0; d < prm.dmax_points; ++d) {
        double dmax = std::pow(10.0, 6.0 + 2.0 * d / (prm.dmax_points - 1));
        // same seed across the sweep: the topology is fixed and the data
        // volumes scale with dmax (common random numbers)
        Scenario s = generate(seed, dmax, prm.n_users);
        s.cost.storage = 0.0;  // three-weight comparison
        double cp = full_configuration(s, prm.loc).config.cost;
        double c1 = scheme1_config(s, prm.loc).config.cost;
        double c2 = scheme2_config(s, prm.loc).config.cost;
        pts.row({static_cast<double>(seed), dmax, cp, c1, c2});
        mean_p[d] += cp / prm.n_seeds;
        mean_s1[d] += c1 / prm.n_seeds;
        mean_s2[d] += c2 / prm.n_seeds;
      }
    }
    emit("fig3_points.csv", pts.str());
    CsvWriter sum({"dmax_bit", "mean_proposed", "mean_scheme1", "mean_scheme2",
                   "reduction_vs_scheme1"});
    double overall = 0.0;
    for (int d = 0; d < prm.dmax_points; ++d) {
      double dmax = std::pow(10.0, 6.0 + 2.0 * d / (prm.dmax_points - 1));
      double red = 1.0 - mean_p[d] / mean_s1[d];
      overall += red / prm.dmax_points;
      sum.row({dmax, mean_p[d], mean_s1[d], mean_s2[d], red});
    }
    emit("fig3_summary.csv", sum.str());
    rep.summary.push_back("mean cost reduction vs scheme1: " + num(overall));
    return rep;
  }

  if (id == "fig4") {
    BandwidthPlan bw = optimal_bandwidth(base, prm.loc);
    BackhaulComputePlan bc = optimal_backhaul_compute(base);
    Grid1D rs{0.85 * bc.backhaul_total, 1.35 * bc.backhaul_total, prm.surface_n};
    Grid1D f{0.4 * bc.compute_total, 2.2 * bc.compute_total, prm.surface_n};
    for (double scale : {0.44, 0.74, 1.0, 1.78}) {
      LatencySurface surf = latency_surface(base, prm.loc, scale * bw.total, rs, f, prm.jobs);
      emit("fig4_b" + num(scale) + ".csv", latency_surface_csv(surf));
    }
    rep.summary.push_back("bandwidth_total_opt_hz: " + num(bw.total));
    return rep;
  }

  if (id == "fig5") {
    BandwidthPlan bw = optimal_bandwidth(base, prm.loc);
    BackhaulComputePlan bc = optimal_backhaul_compute(base);
    const double f_fixed = 4.5e9;
    Grid1D rs{0.85 * bc.backhaul_total, 1.35 * bc.backhaul_total, 200};
    CsvWriter csv({"b_scale", "rs_total_bit_s", "time_s"});
    for (double scale : {0.74, 1.0, 1.78}) {
      LatencySurface surf =
          latency_surface(base, prm.loc, scale * bw.total, rs, Grid1D{f_fixed, f_fixed, 1},
                          prm.jobs);
      for (int i = 0; i < rs.n; ++i) csv.row({scale, rs.at(i), surf.at(i, 0)});
    }
    emit("fig5_curves.csv", csv.str());
    return rep;
  }

  if (id == "fig6") {
    BackhaulComputePlan bc = optimal_backhaul_compute(base);
    CostCurve fc = cost_curve_with_oracle(base, prm.loc, SweepResource::compute_total,
                                          Grid1D{0.0, 4e9, 200});
    emit("fig6_sweep_f.csv", cost_curve_csv(fc));
    CostCurve rc = cost_curve_with_oracle(base, prm.loc, SweepResource::backhaul_total,
                                          Grid1D{1.8e6, 3.2e6, 200});
    emit("fig6_sweep_rs.csv", cost_curve_csv(rc));
    rep.summary.push_back("f_total_opt: " + num(bc.compute_total) +
                          ", argmin_f: " + num(fc.points[fc.argmin].swept));
    rep.summary.push_back("rs_total_opt: " + num(bc.backhaul_total) +
                          ", argmin_rs: " + num(rc.points[rc.argmin].swept));
    return rep;
  }

  if (id == "fig7") {
    int n_topologies = std::min(prm.n_seeds, 3);
    for (int k = 0; k < n_topologies; ++k) {
      std::uint64_t seed = prm.seed0 + static_cast<std::uint64_t>(k);
      Scenario s = generate(seed, 1e8, prm.n_users);
      Bounds box{-1000.0, 1000.0, -1000.0, 1000.0};
      emit("fig7_seed" + std::to_string(seed) + "_surface.csv",
           cost_surface_csv(s, box, prm.grid_res, prm.jobs));
      PlacementResult sca = sca_optimize(s, {prm.sca_eps, 100, {}});
      PlacementResult grid = grid_search(s, box, 10.0, prm.jobs);
      Baselines bl = baselines(s);
      CsvWriter marks({"scheme", "x_m", "y_m", "cost"});
      marks.raw_row({"sca", num(sca.location.x), num(sca.location.y), num(sca.cost)});
      marks.raw_row({"grid", num(grid.location.x), num(grid.location.y), num(grid.cost)});
      marks.raw_row({"geometric_center", num(bl.geometric_center.x), num(bl.geometric_center.y),
                     num(direct_cost(bl.geometric_center, s))});
      marks.raw_row({"weighted_centroid", num(bl.weighted_centroid.x),
                     num(bl.weighted_centroid.y), num(direct_cost(bl.weighted_centroid, s))});
      emit("fig7_seed" + std::to_string(seed) + "_marks.csv", marks.str());
    }
    return rep;
  }

  throw std::invalid_argument("run_experiment: unknown experiment id '" + id + "'");
}

}  // namespace eihplan
