#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "eihplan/config_opt.hpp"
#include "eihplan/parallel.hpp"
#include "eihplan/solver.hpp"
#include "eihplan/textio.hpp"

namespace eihplan {

// ---------------------------------------------------------------------------
// Objective evaluation at a fixed location. Bandwidth is the only
// location-dependent part; backhaul and compute stay at their closed-form
// optimum. Written against the raw channel math on purpose so the
// configuration chain can be cross-checked against it.

inline double bandwidth_cost_at(const Location& loc, const Scenario& s) {
  if (s.noise_model != NoiseModel::fixed_power)
    throw std::invalid_argument("placement needs the fixed_power noise model (rate linear in bandwidth)");
  double sum_b = 0.0;
  for (const Sensor& u : s.sensors) {
    double dx = loc.x - u.pos_x, dy = loc.y - u.pos_y;
    double d2 = dx * dx + dy * dy + s.uav_height * s.uav_height;
    double theta = std::asin(std::min(1.0, s.uav_height / std::sqrt(d2)));
    double unit = (s.angle_unit == AngleUnit::degrees) ? theta * kDegPerRad : theta;
    double pr = 1.0 / (1.0 + s.channel_a * std::exp(-s.channel_b * (unit - s.channel_a)));
    double log_gamma = std::log(u.tx_power / s.noise_power) +
                       2.0 * std::log(s.light_speed / (4.0 * kPi * s.carrier_freq)) -
                       std::log(d2) +
                       (std::log(10.0) / 10.0) * ((s.eta_nlos - s.eta_los) * pr - s.eta_nlos);
    double nu = 0.5 + std::sqrt(0.25 + std::exp(log_gamma));
    double f_nu = 2.0 * std::log(nu) + 1.0 / nu - 1.0;
    sum_b += u.data_volume * kLn2 / (s.latency_req * f_nu);
  }
  return s.cost.bandwidth * sum_b;
}

inline double location_constant_cost(const Scenario& s) {
  BackhaulComputePlan bc = optimal_backhaul_compute(s);
  return s.cost.backhaul * bc.backhaul_total + s.cost.compute * bc.compute_total;
}

inline double direct_cost(const Location& loc, const Scenario& s) {
  return bandwidth_cost_at(loc, s) + location_constant_cost(s);
}

// ---------------------------------------------------------------------------
// Brute-force grid search (the placement oracle).

struct Bounds {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
};

struct TracePoint {
  Location loc;
  double sum_bandwidth = 0.0;  // Hz
};

enum class PlacementStatus { converged, max_iterations, degenerate };

struct PlacementResult {
  Location location;
  double cost = 0.0;
  int iterations = 0;
  std::vector<TracePoint> trace;
  PlacementStatus status = PlacementStatus::converged;
  // activity residuals of the last subproblem, scaled units (see solve_p9)
  std::vector<double> activity;
};

inline PlacementResult grid_search(const Scenario& s, const Bounds& b, double resolution,
                                   int jobs = 1) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid_search: resolution must be positive");
  if (!(b.x_max >= b.x_min && b.y_max >= b.y_min))
    throw std::invalid_argument("grid_search: empty bounds");
  size_t nx = static_cast<size_t>(std::floor((b.x_max - b.x_min) / resolution + 1e-9)) + 1;
  size_t ny = static_cast<size_t>(std::floor((b.y_max - b.y_min) / resolution + 1e-9)) + 1;
  std::vector<double> band(nx * ny);
  parallel_for(ny, jobs, [&](size_t iy) {
    double y = b.y_min + static_cast<double>(iy) * resolution;
    for (size_t ix = 0; ix < nx; ++ix) {
      double x = b.x_min + static_cast<double>(ix) * resolution;
      band[iy * nx + ix] = bandwidth_cost_at({x, y}, s);
    }
  });
  size_t best = 0;
  for (size_t i = 1; i < band.size(); ++i)
    if (band[i] < band[best]) best = i;  // strict: row-major first wins ties
  PlacementResult res;
  res.location = {b.x_min + static_cast<double>(best % nx) * resolution,
                  b.y_min + static_cast<double>(best / nx) * resolution};
  res.cost = band[best] + location_constant_cost(s);
  res.iterations = static_cast<int>(band.size());
  return res;
}

inline std::string cost_surface_csv(const Scenario& s, const Bounds& b, double resolution,
                                    int jobs = 1) {
  size_t nx = static_cast<size_t>(std::floor((b.x_max - b.x_min) / resolution + 1e-9)) + 1;
  size_t ny = static_cast<size_t>(std::floor((b.y_max - b.y_min) / resolution + 1e-9)) + 1;
  double constant = location_constant_cost(s);
  std::vector<double> cost(nx * ny);
  parallel_for(ny, jobs, [&](size_t iy) {
    double y = b.y_min + static_cast<double>(iy) * resolution;
    for (size_t ix = 0; ix < nx; ++ix) {
      double x = b.x_min + static_cast<double>(ix) * resolution;
      cost[iy * nx + ix] = bandwidth_cost_at({x, y}, s) + constant;
    }
  });
  CsvWriter csv({"x_m", "y_m", "cost"});
  for (size_t iy = 0; iy < ny; ++iy)
    for (size_t ix = 0; ix < nx; ++ix)
      csv.row({b.x_min + static_cast<double>(ix) * resolution,
               b.y_min + static_cast<double>(iy) * resolution, cost[iy * nx + ix]});
  return csv.str();
}

// ---------------------------------------------------------------------------
// Heuristic baselines.

struct Baselines {
  Location geometric_center;
  Location weighted_centroid;  // data-volume weighted
};

inline Baselines baselines(const Scenario& s) {
  if (s.sensors.empty()) throw std::invalid_argument("baselines: need at least one sensor");
  Baselines b;
  double wsum = 0.0;
  for (const Sensor& u : s.sensors) {
    b.geometric_center.x += u.pos_x;
    b.geometric_center.y += u.pos_y;
    b.weighted_centroid.x += u.data_volume * u.pos_x;
    b.weighted_centroid.y += u.data_volume * u.pos_y;
    wsum += u.data_volume;
  }
  b.geometric_center.x /= static_cast<double>(s.sensors.size());
  b.geometric_center.y /= static_cast<double>(s.sensors.size());
  b.weighted_centroid.x /= wsum;
  b.weighted_centroid.y /= wsum;
  return b;
}

// ---------------------------------------------------------------------------
// Convexified location subproblem. Internally nondimensionalized:
// coordinates and hub height in km, bandwidth in MHz, squared distance in
// km^2, angle in radians; nu and the LoS probability are naturally O(1).

struct ScaIterate {
  Location loc;                     // m
  std::vector<double> bandwidth;    // Hz
  std::vector<double> nu;
  std::vector<double> q;            // m^2, squared hub-sensor distance
  std::vector<double> pr;           // LoS probability slack
  std::vector<double> theta;        // sigmoid-unit angle (deg or rad)
  std::vector<double> constant_c;   // per-user channel constant of the log form
};

namespace detail {

constexpr double kKm = 1000.0;
constexpr double kKm2 = 1e6;

struct ScaScaled {
  // per-user constants
  std::vector<double> sx, sy;   // km
  std::vector<double> k;        // D ln2 / (T 1e6)
  std::vector<double> c_eff;    // channel constant, km^2 log convention
  double alpha = 0.0;           // (ln10/10) (eta_nlos - eta_los)
  double b_eff = 0.0;           // sigmoid slope per radian
  double sig_a = 0.0;
  double h_km = 0.0;
  int users = 0;

  static ScaScaled from(const Scenario& s) {
    if (s.noise_model != NoiseModel::fixed_power)
      throw std::invalid_argument("placement needs the fixed_power noise model");
    ScaScaled c;
    c.users = static_cast<int>(s.sensors.size());
    double conv = (s.angle_unit == AngleUnit::degrees) ? kDegPerRad : 1.0;
    c.alpha = std::log(10.0) / 10.0 * (s.eta_nlos - s.eta_los);
    c.b_eff = s.channel_b * conv;
    c.sig_a = s.channel_a;
    c.h_km = s.uav_height / kKm;
    for (const Sensor& u : s.sensors) {
      c.sx.push_back(u.pos_x / kKm);
      c.sy.push_back(u.pos_y / kKm);
      c.k.push_back(u.data_volume * kLn2 / (s.latency_req * kMHz));
      double base = std::log(u.tx_power / s.noise_power) +
                    2.0 * std::log(s.light_speed / (4.0 * kPi * s.carrier_freq)) -
                    std::log(10.0) / 10.0 * s.eta_nlos;
      c.c_eff.push_back(base - std::log(kKm2));
    }
    return c;
  }
};

}  // namespace detail

// Chain-construct the iterate at a location: squared distance, angle, LoS
// slack, nu, and bandwidth, each making its defining relation an equality.
inline ScaIterate build_iterate(const Location& loc, const Scenario& s) {
  ScaIterate it;
  it.loc = loc;
  for (const Sensor& u : s.sensors) {
    double dx = loc.x - u.pos_x, dy = loc.y - u.pos_y;
    double q = dx * dx + dy * dy + s.uav_height * s.uav_height;
    double theta = std::asin(std::min(1.0, s.uav_height / std::sqrt(q)));
    double unit = (s.angle_unit == AngleUnit::degrees) ? theta * kDegPerRad : theta;
    double pr = 1.0 / (1.0 + s.channel_a * std::exp(-s.channel_b * (unit - s.channel_a)));
    double c0 = std::log(u.tx_power / s.noise_power) +
                2.0 * std::log(s.light_speed / (4.0 * kPi * s.carrier_freq)) -
                std::log(10.0) / 10.0 * s.eta_nlos;
    double log_gamma = c0 + std::log(10.0) / 10.0 * (s.eta_nlos - s.eta_los) * pr - std::log(q);
    double nu = 0.5 + std::sqrt(0.25 + std::exp(log_gamma));
    double f_nu = 2.0 * std::log(nu) + 1.0 / nu - 1.0;
    it.q.push_back(q);
    it.theta.push_back(unit);
    it.pr.push_back(pr);
    it.nu.push_back(nu);
    it.bandwidth.push_back(u.data_volume * kLn2 / (s.latency_req * f_nu));
    it.constant_c.push_back(c0);
  }
  return it;
}

// Feasibility of an iterate for the subproblem built at itself: max g over
// all constraints (scaled units). Chain-built iterates score ~0.
inline double iterate_self_violation(const ScaIterate& it, const Scenario& s) {
  // At the build point every linearization is tangent, so the residuals
  // reduce to the original constraint values.
  double worst = -std::numeric_limits<double>::infinity();
  detail::ScaScaled C = detail::ScaScaled::from(s);
  const double conv = (s.angle_unit == AngleUnit::degrees) ? kDegPerRad : 1.0;
  for (size_t u = 0; u < it.nu.size(); ++u) {
    double B = it.bandwidth[u] / kMHz, nu = it.nu[u];
    double q = it.q[u] / detail::kKm2, pr = it.pr[u], th = it.theta[u] / conv;
    worst = std::max(worst, C.k[u] / B - (2.0 * std::log(nu) + 1.0 / nu - 1.0));
    worst = std::max(worst, std::log(nu * (nu - 1.0)) - C.alpha * pr + std::log(q) - C.c_eff[u]);
    double dx = it.loc.x / detail::kKm - C.sx[u], dy = it.loc.y / detail::kKm - C.sy[u];
    worst = std::max(worst, dx * dx + dy * dy + C.h_km * C.h_km - q);
    double sig = C.sig_a * std::exp(-C.b_eff * th + s.channel_b * s.channel_a);
    worst = std::max(worst, 1.0 + sig - 1.0 / pr);
    worst = std::max(worst, std::sin(th) - C.h_km / std::sqrt(q));
    worst = std::max(worst, 1.0 - nu);
    worst = std::max(worst, pr - 1.0);
    worst = std::max(worst, -pr);
    worst = std::max(worst, th - kPi / 2.0);
    worst = std::max(worst, -th);
  }
  return worst;
}

struct P9Options {
  BarrierOptions barrier;
};

struct P9Result {
  ScaIterate point;
  BarrierReport report;
  double bandwidth_total = 0.0;   // Hz, at the subproblem solution
  // max |g| over users for the five structural constraint families, scaled
  double activity_rate = 0.0;     // bandwidth-rate coupling
  double activity_channel = 0.0;  // linearized channel log identity
  double activity_distance = 0.0; // squared-distance slack
  double activity_los = 0.0;      // linearized LoS slack
  double activity_angle = 0.0;    // linearized elevation slack
  double worst_violation = 0.0;   // max g over all constraints (scaled)
};

// Solve the convexified subproblem built at `point`. The point must satisfy
// every constraint of its own subproblem (chain-built iterates do, with
// equality); the solver runs on a relax-by-epsilon set so a boundary start
// is admissible.
inline P9Result solve_p9(const ScaIterate& point, const Scenario& s, const P9Options& opt = {}) {
  using detail::ScaScaled;
  const ScaScaled C = ScaScaled::from(s);
  const int U = C.users;
  if (U == 0) throw std::invalid_argument("solve_p9: empty scenario");
  double self = iterate_self_violation(point, s);
  if (self > opt.barrier.relax * 0.5)
    throw std::invalid_argument("solve_p9: linearization point violates its own subproblem by " +
                                num(self));
  const int n = 2 + 5 * U;
  const double conv = (s.angle_unit == AngleUnit::degrees) ? kDegPerRad : 1.0;

  auto iB = [](int u) { return 2 + 5 * u; };
  auto iN = [](int u) { return 3 + 5 * u; };
  auto iQ = [](int u) { return 4 + 5 * u; };
  auto iP = [](int u) { return 5 + 5 * u; };
  auto iT = [](int u) { return 6 + 5 * u; };

  // scaled start
  std::vector<double> x(n, 0.0);
  x[0] = point.loc.x / detail::kKm;
  x[1] = point.loc.y / detail::kKm;
  for (int u = 0; u < U; ++u) {
    x[iB(u)] = point.bandwidth[u] / kMHz;
    x[iN(u)] = point.nu[u];
    x[iQ(u)] = point.q[u] / detail::kKm2;
    x[iP(u)] = point.pr[u];
    x[iT(u)] = point.theta[u] / conv;  // radians internally
  }

  std::vector<double> objective(n, 0.0);
  for (int u = 0; u < U; ++u) objective[iB(u)] = s.cost.bandwidth * kMHz;

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<SmoothConstraint> cons;
  cons.reserve(static_cast<size_t>(U) * 10);
  for (int u = 0; u < U; ++u) {
    const double k = C.k[u];
    const double ceff = C.c_eff[u];
    const double alpha = C.alpha;
    const double beff = C.b_eff;
    const double siga = C.sig_a;
    const double hkm = C.h_km;
    const double sx = C.sx[u], sy = C.sy[u];
    const double nu0 = x[iN(u)];
    const double q0 = x[iQ(u)];
    const double p0 = x[iP(u)];
    const double t0 = x[iT(u)];
    const double slope_nu = (2.0 * nu0 - 1.0) / (nu0 * (nu0 - 1.0));
    const double log_nu0 = std::log(nu0 * (nu0 - 1.0));
    const int b_i = iB(u), n_i = iN(u), q_i = iQ(u), p_i = iP(u), t_i = iT(u);
    // sigmoid in radians with the a-offset folded: a * exp(b_unit*a) * e^{-beff t}
    const double sig_scale = siga * std::exp(s.channel_b * s.channel_a);

    // rate coupling: k/B - (2 ln nu + 1/nu - 1) <= 0
    cons.push_back(SmoothConstraint{
        [=](const std::vector<double>& v, std::vector<double>* g) {
          double B = v[b_i], nu = v[n_i];
          if (!(B > 0.0) || !(nu > 0.0)) return inf;
          if (g) {
            std::fill(g->begin(), g->end(), 0.0);
            (*g)[b_i] = -k / (B * B);
            (*g)[n_i] = -(2.0 / nu - 1.0 / (nu * nu));
          }
          return k / B - (2.0 * std::log(nu) + 1.0 / nu - 1.0);
        },
        [=](const std::vector<double>& v, double w, std::vector<double>& h) {
          double B = v[b_i], nu = v[n_i];
          h[b_i * n + b_i] += w * 2.0 * k / (B * B * B);
          h[n_i * n + n_i] += w * (2.0 / (nu * nu) - 2.0 / (nu * nu * nu));
        }});

    // linearized channel identity:
    // lognu0 + slope*(nu-nu0) + ln q0 + (q-q0)/q0 - alpha P - ceff <= 0
    cons.push_back(SmoothConstraint{
        [=](const std::vector<double>& v, std::vector<double>* g) {
          if (g) {
            std::fill(g->begin(), g->end(), 0.0);
            (*g)[n_i] = slope_nu;
            (*g)[q_i] = 1.0 / q0;
            (*g)[p_i] = -alpha;
          }
          return log_nu0 + slope_nu * (v[n_i] - nu0) + std::log(q0) +
                 (v[q_i] - q0) / q0 - alpha * v[p_i] - ceff;
        },
        nullptr});

    // squared distance: (hx-sx)^2 + (hy-sy)^2 + H^2 - Q <= 0
    cons.push_back(SmoothConstraint{
        [=](const std::vector<double>& v, std::vector<double>* g) {
          double dx = v[0] - sx, dy = v[1] - sy;
          if (g) {
            std::fill(g->begin(), g->end(), 0.0);
            (*g)[0] = 2.0 * dx;
            (*g)[1] = 2.0 * dy;
            (*g)[q_i] = -1.0;
          }
          return dx * dx + dy * dy + hkm * hkm - v[q_i];
        },
        [=](const std::vector<double>&, double w, std::vector<double>& h) {
          h[0 * n + 0] += 2.0 * w;
          h[1 * n + 1] += 2.0 * w;
        }});

    // linearized LoS slack: 1 + sig(theta) - 2/p0 + P/p0^2 <= 0
    cons.push_back(SmoothConstraint{
        [=](const std::vector<double>& v, std::vector<double>* g) {
          double sig = sig_scale * std::exp(-beff * v[t_i]);
          if (g) {
            std::fill(g->begin(), g->end(), 0.0);
            (*g)[t_i] = -beff * sig;
            (*g)[p_i] = 1.0 / (p0 * p0);
          }
          return 1.0 + sig - 2.0 / p0 + v[p_i] / (p0 * p0);
        },
        [=](const std::vector<double>& v, double w, std::vector<double>& h) {
          double sig = sig_scale * std::exp(-beff * v[t_i]);
          h[t_i * n + t_i] += w * beff * beff * sig;
        }});

    // linearized elevation: sin t0 + cos t0 (t - t0) <= H/sqrt(q0) - H (q - q0) / (2 q0^{3/2})
    {
      double sin0 = std::sin(t0), cos0 = std::cos(t0);
      double rhs0 = hkm / std::sqrt(q0);
      double dq = hkm / (2.0 * q0 * std::sqrt(q0));
      cons.push_back(SmoothConstraint{
          [=](const std::vector<double>& v, std::vector<double>* g) {
            if (g) {
              std::fill(g->begin(), g->end(), 0.0);
              (*g)[t_i] = cos0;
              (*g)[q_i] = dq;
            }
            return sin0 + cos0 * (v[t_i] - t0) - rhs0 + dq * (v[q_i] - q0);
          },
          nullptr});
    }

    auto affine_bound = [&](int idx, double sign, double offset) {
      cons.push_back(SmoothConstraint{
          [=](const std::vector<double>& v, std::vector<double>* g) {
            if (g) {
              std::fill(g->begin(), g->end(), 0.0);
              (*g)[idx] = sign;
            }
            return sign * v[idx] + offset;
          },
          nullptr});
    };
    affine_bound(n_i, -1.0, 1.0);          // nu >= 1
    affine_bound(p_i, -1.0, 0.0);          // P >= 0
    affine_bound(p_i, 1.0, -1.0);          // P <= 1
    affine_bound(t_i, -1.0, 0.0);          // theta >= 0
    affine_bound(t_i, 1.0, -kPi / 2.0);    // theta <= quarter turn
  }

  BarrierSolver solver(objective, cons, opt.barrier);
  P9Result res;
  res.report = solver.minimize(x);
  if (!res.report.converged)
    throw std::runtime_error("solve_p9: " + res.report.message);

  // Vertex polish. The LoS sigmoid can be numerically flat in theta, which
  // leaves the barrier solution centered inside a flat optimal face where
  // the elevation and LoS constraints carry slack. Walk the free slack
  // variables onto their bounds: Q to the exact squared distance, theta to
  // the linearized-elevation bound, Pr to the linearized-LoS bound. Each
  // move keeps every other constraint feasible and never worsens the
  // objective.
  for (int u = 0; u < U; ++u) {
    const double q0 = x[iQ(u)];  // pre-polish values double as old iterates
    const double t0p = point.theta[u] / conv;
    const double p0p = point.pr[u];
    double dx0 = x[0] - C.sx[u], dy0 = x[1] - C.sy[u];
    double q_exact = dx0 * dx0 + dy0 * dy0 + C.h_km * C.h_km;
    if (q_exact <= x[iQ(u)]) x[iQ(u)] = q_exact;
    double q_lin = point.q[u] / detail::kKm2;  // linearization base of (31)
    double cos0 = std::cos(t0p);
    if (cos0 > 1e-9) {
      double rhs = C.h_km / std::sqrt(q_lin) -
                   C.h_km * (x[iQ(u)] - q_lin) / (2.0 * q_lin * std::sqrt(q_lin));
      double theta_tight = t0p + (rhs - std::sin(t0p)) / cos0;
      if (theta_tight >= x[iT(u)] && theta_tight <= kPi / 2.0) x[iT(u)] = theta_tight;
    }
    double sig = C.sig_a * std::exp(s.channel_b * s.channel_a - C.b_eff * x[iT(u)]);
    double pr_tight = 2.0 * p0p - p0p * p0p * (1.0 + sig);
    if (pr_tight >= x[iP(u)] && pr_tight <= 1.0) x[iP(u)] = pr_tight;
    (void)q0;
  }

  res.point.loc = {x[0] * detail::kKm, x[1] * detail::kKm};
  for (int u = 0; u < U; ++u) {
    res.point.bandwidth.push_back(x[iB(u)] * kMHz);
    res.point.nu.push_back(x[iN(u)]);
    res.point.q.push_back(x[iQ(u)] * detail::kKm2);
    res.point.pr.push_back(x[iP(u)]);
    res.point.theta.push_back(x[iT(u)] * conv);
    res.point.constant_c.push_back(point.constant_c[u]);
    res.bandwidth_total += x[iB(u)] * kMHz;
  }
  // structural activity: |g| per family at the solution
  for (int u = 0; u < U; ++u) {
    size_t base = static_cast<size_t>(u) * 10;
    auto absg = [&](size_t j) { return std::fabs(cons[base + j].eval(x, nullptr)); };
    res.activity_rate = std::max(res.activity_rate, absg(0));
    res.activity_channel = std::max(res.activity_channel, absg(1));
    res.activity_distance = std::max(res.activity_distance, absg(2));
    res.activity_los = std::max(res.activity_los, absg(3));
    res.activity_angle = std::max(res.activity_angle, absg(4));
  }
  res.worst_violation = res.report.worst_violation;
  return res;
}

struct ScaOptions {
  double eps = 1e-4;
  int max_iter = 100;
  P9Options subproblem;
};

// Iterative location optimization: start at the geometric center, repeatedly
// solve the convexified subproblem, re-anchoring the linearization on the
// accepted location. A halving safeguard keeps the true cost non-increasing
// when the linearization overshoots.
inline PlacementResult sca_optimize(const Scenario& s, const ScaOptions& opt = {}) {
  if (s.sensors.empty()) throw std::invalid_argument("sca_optimize: need at least one sensor");
  PlacementResult res;
  Location loc = baselines(s).geometric_center;
  if (s.cost.bandwidth <= 0.0) {
    // location does not affect the objective; nothing to optimize
    res.location = loc;
    res.cost = direct_cost(loc, s);
    res.status = PlacementStatus::degenerate;
    return res;
  }

  ScaIterate it = build_iterate(loc, s);
  auto sum_b = [](const ScaIterate& i) {
    double t = 0.0;
    for (double b : i.bandwidth) t += b;
    return t;
  };
  double prev_sum = sum_b(it);
  double prev_cost = direct_cost(loc, s);
  res.trace.push_back({loc, prev_sum});

  auto pinched = [&](const Location& l) {
    for (const Sensor& u : s.sensors) {
      double dx = l.x - u.pos_x, dy = l.y - u.pos_y;
      if (dx * dx + dy * dy < 1.0) return true;  // within 1 m of a sensor
    }
    return false;
  };

  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    res.iterations = iter;
    if (pinched(loc)) {
      // the linearized elevation pins the location; the iterate is final
      res.status = PlacementStatus::converged;
      break;
    }
    P9Result sol = solve_p9(it, s, opt.subproblem);
    res.activity = {sol.activity_rate, sol.activity_channel, sol.activity_distance,
                    sol.activity_los, sol.activity_angle};

    Location cand = sol.point.loc;
    double cand_cost = direct_cost(cand, s);
    double step = 1.0;
    int halvings = 0;
    while (cand_cost > prev_cost * (1.0 + 1e-12) && halvings < 20) {
      step *= 0.5;
      cand = {loc.x + step * (sol.point.loc.x - loc.x),
              loc.y + step * (sol.point.loc.y - loc.y)};
      cand_cost = direct_cost(cand, s);
      ++halvings;
    }
    if (cand_cost > prev_cost * (1.0 + 1e-12)) {
      res.status = PlacementStatus::converged;  // no descent left
      break;
    }

    loc = cand;
    it = build_iterate(loc, s);
    double cur_sum = sum_b(it);
    res.trace.push_back({loc, cur_sum});
    bool small_change = std::fabs(cur_sum - prev_sum) / prev_sum < opt.eps;
    prev_sum = cur_sum;
    prev_cost = cand_cost;
    if (small_change) {
      res.status = PlacementStatus::converged;
      break;
    }
    if (iter == opt.max_iter) res.status = PlacementStatus::max_iterations;
  }

  res.location = loc;
  res.cost = direct_cost(loc, s);
  return res;
}

inline std::string sca_trace_csv(const PlacementResult& r) {
  CsvWriter csv({"iter", "h_x_m", "h_y_m", "sum_bandwidth_hz"});
  for (size_t i = 0; i < r.trace.size(); ++i)
    csv.row({static_cast<double>(i), r.trace[i].loc.x, r.trace[i].loc.y,
             r.trace[i].sum_bandwidth});
  return csv.str();
}

}  // namespace eihplan
