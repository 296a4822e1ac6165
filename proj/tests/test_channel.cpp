#include <cmath>
#include <functional>

#include "doctest.h"
#include "eihplan/channel.hpp"
#include "eihplan/expint.hpp"
#include "eihplan/rng.hpp"
#include "eihplan/scenario.hpp"

using namespace eihplan;

namespace {

// Independent quadrature oracle for the ergodic per-Hz rate
// integral(0, inf) e^-x log2(1 + gamma x) dx, adaptive Simpson plus an
// analytic tail bound.
double quad_se(double gamma) {
  auto f = [gamma](double x) { return std::exp(-x) * std::log2(1.0 + gamma * x); };
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double a, double b, double fa, double fb, double fm, double whole, int depth) -> double {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 40 || std::fabs(left + right - whole) < 1e-13 * (1.0 + std::fabs(whole)))
      return left + right + (left + right - whole) / 15.0;
    return rec(a, m, fa, fm, flm, left, depth + 1) + rec(m, b, fm, fb, frm, right, depth + 1);
  };
  double a = 0.0, b = 60.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fb, fm, whole, 0);
}

Scenario base() { return generate(3, 1e8, 5); }

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("geometry places the direct-overhead sensor at d = H, theta = pi/2") {
  Scenario s = base();
  Sensor u = s.sensors[0];
  u.pos_x = 120.0;
  u.pos_y = -40.0;
  ChannelState st = channel_state({120.0, -40.0}, u, s);
  CHECK(st.distance == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(st.elevation == doctest::Approx(kPi / 2).epsilon(1e-12));

  u.pos_x = 1000.0;
  u.pos_y = 0.0;
  ChannelState st2 = channel_state({0.0, 0.0}, u, s);
  CHECK(st2.distance == doctest::Approx(1000.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(st2.elevation == doctest::Approx(kPi / 4).epsilon(1e-12));
}

TEST_CASE("large-scale gain below the hub matches the hand-computed constant") {
  // Direct evaluation of the gain expression with the reference parameters,
  // degrees-mode sigmoid, sensor directly below the hub.
  Scenario s = base();
  Sensor u = s.sensors[0];
  u.pos_x = 0.0;
  u.pos_y = 0.0;
  u.tx_power = 1.0;
  ChannelState st = channel_state({0.0, 0.0}, u, s);
  CHECK(st.gain == doctest::Approx(4.068959780778669e-6).epsilon(1e-12));
  CHECK(st.mean_snr == doctest::Approx(4158.7881159175).epsilon(1e-10));
}

TEST_CASE("gain decreases strictly with horizontal distance (degrees mode)") {
  Scenario s = base();
  Sensor u = s.sensors[0];
  u.pos_x = 0.0;
  u.pos_y = 0.0;
  double prev = channel_state({0.0, 0.0}, u, s).gain;
  for (int m = 1; m <= 5000; ++m) {
    double g = channel_state({static_cast<double>(m), 0.0}, u, s).gain;
    REQUIRE(g < prev);
    prev = g;
  }
}

TEST_CASE("nu solves nu(nu-1) = gamma across twelve decades") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    double gamma = std::pow(10.0, rng.uniform(-3.0, 6.0));
    double nu = rate_nu(gamma);
    CHECK(nu >= 1.0);
    CHECK(nu * (nu - 1.0) == doctest::Approx(gamma).epsilon(1e-12));
  }
}

TEST_CASE("the two closed forms of the approximate rate agree") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    double gamma = std::pow(10.0, rng.uniform(-3.0, 6.0));
    double nu = rate_nu(gamma);
    CHECK(spectral_efficiency_from_nu(nu) ==
          doctest::Approx(spectral_efficiency_three_term(gamma, nu)).epsilon(1e-12));
  }
}

TEST_CASE("approximate rate: known values and limits") {
  // gamma -> 0+: nu -> 1, SE -> 0
  CHECK(spectral_efficiency_from_nu(rate_nu(1e-12)) == doctest::Approx(0.0).epsilon(1e-6));
  // gamma = 2 solves nu(nu-1)=2 at nu=2 exactly
  double nu = rate_nu(2.0);
  CHECK(nu == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(spectral_efficiency_from_nu(nu) ==
        doctest::Approx((2.0 * std::log(2.0) + 0.5 - 1.0) / std::log(2.0)).epsilon(1e-15));
  CHECK(spectral_efficiency_from_nu(nu) == doctest::Approx(1.2787).epsilon(1e-4));
  CHECK_THROWS_AS(rate_nu(0.0), std::domain_error);
}

TEST_CASE("exact ergodic rate agrees with the quadrature oracle") {
  CHECK(spectral_efficiency_exact(1.0) == doctest::Approx(quad_se(1.0)).epsilon(1e-9));
  CHECK(spectral_efficiency_exact(1.0) == doctest::Approx(0.8604).epsilon(1e-4));
  CHECK(spectral_efficiency_exact(0.1) == doctest::Approx(quad_se(0.1)).epsilon(1e-9));
  CHECK(spectral_efficiency_exact(10.0) == doctest::Approx(quad_se(10.0)).epsilon(1e-9));
  CHECK(spectral_efficiency_exact(1e-6) < 2e-6);
  CHECK_THROWS_AS(spectral_efficiency_exact(-1.0), std::domain_error);
}

TEST_CASE("Monte-Carlo estimator is deterministic, unbiased, and exact at zero SNR") {
  ChannelState st;
  st.mean_snr = 0.0;
  CHECK(spectral_efficiency_mc(st, 1000, 1).spectral_efficiency == 0.0);

  st.mean_snr = 2.0;
  McEstimate a = spectral_efficiency_mc(st, 200000, 123);
  McEstimate b = spectral_efficiency_mc(st, 200000, 123);
  CHECK(a.spectral_efficiency == b.spectral_efficiency);
  double exact = spectral_efficiency_exact(2.0);
  CHECK(std::fabs(a.spectral_efficiency - exact) <= 3.0 * a.std_error);

  for (double gamma : {0.1, 1.0, 10.0, 100.0}) {
    st.mean_snr = gamma;
    McEstimate e = spectral_efficiency_mc(st, 1000000, 2024);
    CHECK(std::fabs(e.spectral_efficiency - spectral_efficiency_exact(gamma)) <=
          3.0 * e.std_error);
  }
}

TEST_CASE("approximation accuracy versus the exact rate at high SNR") {
  ChannelState st;
  st.mean_snr = 1000.0;
  McEstimate mc = spectral_efficiency_mc(st, 1000000, 99);
  double approx = spectral_efficiency_approx(st).spectral_efficiency;
  // The deterministic equivalent sits about 5.8 percent below the ergodic
  // value at gamma = 1000; pin the measured gap so regressions surface.
  double rel = std::fabs(mc.spectral_efficiency - approx) / mc.spectral_efficiency;
  CHECK(rel < 0.07);
  CHECK(rel > 0.04);
}

TEST_CASE("radians-mode sigmoid produces the literal-formula gain") {
  Scenario s = base();
  s.angle_unit = AngleUnit::radians;
  Sensor u = s.sensors[0];
  u.pos_x = 300.0;
  u.pos_y = 400.0;
  ChannelState st = channel_state({0.0, 0.0}, u, s);
  double theta = std::atan2(1000.0, 500.0);
  double pl = 1.0 / (1.0 + s.channel_a * std::exp(-s.channel_b * (theta - s.channel_a)));
  double att = (s.eta_los - s.eta_nlos) * pl + s.eta_nlos;
  double want = s.light_speed / (4.0 * kPi * s.carrier_freq * st.distance) *
                std::pow(10.0, -att / 20.0);
  CHECK(st.gain == doctest::Approx(want).epsilon(1e-14));
}

}  // TEST_SUITE
