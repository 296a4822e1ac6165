#pragma once

#include <cmath>
#include <stdexcept>

#include "eihplan/expint.hpp"
#include "eihplan/rng.hpp"
#include "eihplan/scenario.hpp"
#include "eihplan/units.hpp"

namespace eihplan {

// Geometry and large-scale gain of one ground-to-UAV link.
struct ChannelState {
  double distance = 0.0;     // m, always >= uav_height
  double elevation = 0.0;    // rad, in (0, pi/2]
  double gain = 0.0;         // large-scale amplitude gain
  double mean_snr = 0.0;     // p * gain^2 / noise
};

// Deterministic-equivalent spectral efficiency and its auxiliary variable.
struct RateApprox {
  double nu = 0.0;                  // >= 1, solves nu*(nu-1) = mean_snr
  double spectral_efficiency = 0.0; // bit/s/Hz
};

struct McEstimate {
  double spectral_efficiency = 0.0; // bit/s/Hz
  double std_error = 0.0;
};

// Line-of-sight probability: 1 / (1 + a*exp(-b*(theta - a))) with theta
// expressed in the configured sigmoid unit.
inline double los_probability(double elevation_rad, const Scenario& s) {
  double theta = (s.angle_unit == AngleUnit::degrees) ? elevation_rad * kDegPerRad
                                                      : elevation_rad;
  return 1.0 / (1.0 + s.channel_a * std::exp(-s.channel_b * (theta - s.channel_a)));
}

inline double large_scale_gain(double distance, double elevation_rad, const Scenario& s) {
  double p_los = los_probability(elevation_rad, s);
  double excess_db = (s.eta_los - s.eta_nlos) * p_los + s.eta_nlos;
  double fspl = s.light_speed / (4.0 * kPi * s.carrier_freq * distance);
  return fspl * db_to_linear_amplitude(excess_db);
}

inline ChannelState channel_state(const Location& loc, const Sensor& u, const Scenario& s) {
  double dx = loc.x - u.pos_x;
  double dy = loc.y - u.pos_y;
  double horizontal = std::sqrt(dx * dx + dy * dy);
  ChannelState st;
  st.distance = std::sqrt(horizontal * horizontal + s.uav_height * s.uav_height);
  st.elevation = std::atan2(s.uav_height, horizontal);
  st.gain = large_scale_gain(st.distance, st.elevation, s);
  st.mean_snr = u.tx_power * st.gain * st.gain / s.noise_power;
  return st;
}

// nu >= 1 root of nu*(nu-1) = gamma.
inline double rate_nu(double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("rate_nu: mean SNR must be positive");
  return 0.5 + std::sqrt(0.25 + gamma);
}

inline constexpr double kLn2 = 0.69314718055994530941723212145817657;

inline double spectral_efficiency_from_nu(double nu) {
  return (2.0 * std::log(nu) + 1.0 / nu - 1.0) / kLn2;
}

// Deterministic-equivalent approximation of the ergodic per-Hz rate.
inline RateApprox spectral_efficiency_approx(const ChannelState& st) {
  RateApprox r;
  r.nu = rate_nu(st.mean_snr);
  r.spectral_efficiency = spectral_efficiency_from_nu(r.nu);
  return r;
}

// The same quantity in its three-term form; agrees with the nu form once
// nu*(nu-1) = gamma is substituted. Kept for cross-checking.
inline double spectral_efficiency_three_term(double gamma, double nu) {
  return (std::log(1.0 + gamma / nu) - gamma / (gamma + nu) + std::log(nu)) / kLn2;
}

// Monte-Carlo estimate of E[log2(1 + gamma * X)], X ~ Exp(1) (Rayleigh
// fading magnitude squared). Deterministic for a given seed.
inline McEstimate spectral_efficiency_mc(const ChannelState& st, long n_samples,
                                         std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("spectral_efficiency_mc: need n_samples >= 1");
  if (st.mean_snr == 0.0) return {0.0, 0.0};
  Rng rng(Rng::derive(seed, 0xfad1d6));
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    double v = std::log1p(st.mean_snr * rng.exponential()) / kLn2;
    sum += v;
    sum_sq += v * v;
  }
  double n = static_cast<double>(n_samples);
  McEstimate est;
  est.spectral_efficiency = sum / n;
  double var = (sum_sq - sum * sum / n) / (n > 1.0 ? n - 1.0 : 1.0);
  est.std_error = std::sqrt(std::max(var, 0.0) / n);
  return est;
}

// Exact ergodic per-Hz rate over Rayleigh fading:
// E[log2(1 + gamma X)] = e^{1/gamma} E1(1/gamma) / ln 2.
inline double spectral_efficiency_exact(double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("spectral_efficiency_exact: gamma must be positive");
  double inv = 1.0 / gamma;
  if (inv > 1.0) return expint_e1_scaled_cf(inv) / kLn2;  // no overflow at tiny gamma
  return std::exp(inv) * expint_e1(inv) / kLn2;
}

}  // namespace eihplan
