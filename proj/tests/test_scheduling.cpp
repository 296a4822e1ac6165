#include <cmath>

#include "doctest.h"
#include "eihplan/rng.hpp"
#include "eihplan/scheduling.hpp"

using namespace eihplan;

namespace {

EtaOptInput random_input(Rng& rng) {
  EtaOptInput in;
  in.data = rng.uniform(1e6, 1e8);
  in.intensity = rng.uniform(1000.0, 5000.0);
  in.output_ratio = rng.uniform(0.01, 0.2);
  in.rate_in = rng.uniform(1e4, 1e6);
  // Spread backhaul and cpu across all six cases.
  in.rate_backhaul = in.rate_in * rng.uniform(0.02, 2.0);
  in.cpu_freq = in.intensity * in.rate_in * rng.uniform(0.0, 2.0);
  return in;
}

// Parameter families tracing the eight sweep lines of the case analysis:
// three backhaul regimes crossed with increasing compute capacity.
EtaOptInput family_input(int line, Rng& rng) {
  EtaOptInput in;
  in.data = rng.uniform(1e6, 1e8);
  in.intensity = rng.uniform(1000.0, 5000.0);
  in.output_ratio = rng.uniform(0.02, 0.2);
  in.rate_in = rng.uniform(1e4, 1e6);
  double r = in.rate_in, z = in.output_ratio;
  double cpu = 0.0;
  switch (line) {
    case 1: in.rate_backhaul = r * rng.uniform(1.05, 2.0); cpu = r * rng.uniform(0.05, 0.9); break;
    case 2: in.rate_backhaul = r * rng.uniform(1.05, 2.0); cpu = r * rng.uniform(1.05, 2.0); break;
    case 3: in.rate_backhaul = r * rng.uniform(z * 1.05, 0.95); cpu = (r - in.rate_backhaul) / (1.0 - z) * rng.uniform(0.05, 0.95); break;
    case 4: in.rate_backhaul = r * rng.uniform(z * 1.05, 0.95); cpu = (r - in.rate_backhaul) / (1.0 - z) + ((r - (r - in.rate_backhaul) / (1.0 - z)) > 0 ? (r - (r - in.rate_backhaul) / (1.0 - z)) * rng.uniform(0.05, 0.95) : 0.0); break;
    case 5: in.rate_backhaul = r * rng.uniform(z * 1.05, 0.95); cpu = r * rng.uniform(1.05, 2.0); break;
    case 6: in.rate_backhaul = r * z * rng.uniform(0.05, 0.95); cpu = in.rate_backhaul / z * rng.uniform(0.05, 0.95); break;
    case 7: in.rate_backhaul = r * z * rng.uniform(0.05, 0.95); cpu = in.rate_backhaul / z + (r - in.rate_backhaul / z) * rng.uniform(0.05, 0.95); break;
    default: in.rate_backhaul = r * z * rng.uniform(0.05, 0.95); cpu = r * rng.uniform(1.05, 2.0); break;
  }
  in.cpu_freq = cpu * in.intensity;
  return in;
}

}  // namespace

TEST_SUITE("scheduling") {

TEST_CASE("slow backhaul: upload everything raw") {
  EtaOptInput in{2e5, 3e5, 1e9, 1e7, 2000.0, 0.05};
  EtaOptResult r = optimal_eta(in);
  CHECK(r.branch == 1);
  CHECK(r.eta == 0.0);
  CHECK(r.latency == doctest::Approx(1e7 / 2e5).epsilon(1e-15));
  CHECK(r.storage == 0.0);
}

TEST_CASE("fast link with mid-range compute: full compute, backhaul-limited") {
  // rate >= backhaul/zeta and backhaul/zeta <= F/rho < rate
  EtaOptInput in{2e5, 5e3, 0.0, 1e7, 2000.0, 0.05};
  in.cpu_freq = in.intensity * (in.rate_backhaul / in.output_ratio) * 1.5;  // 1.5e5 < rate
  EtaOptResult r = optimal_eta(in);
  CHECK(r.branch == 5);
  CHECK(r.eta == 1.0);
  CHECK(r.latency == doctest::Approx(0.05 * 1e7 / 5e3).epsilon(1e-12));
}

TEST_CASE("balanced region keeps the hub empty at the arrival-limited latency") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    EtaOptInput in = random_input(rng);
    double z = in.output_ratio;
    in.rate_backhaul = in.rate_in * rng.uniform(z + 0.01, 0.99);
    // nudged strictly inside the balanced region so float rounding cannot
    // land the constructed point a hair on the compute-starved side
    in.cpu_freq = in.intensity * (in.rate_in - in.rate_backhaul) / (1.0 - z) * (1.0 + 1e-9);
    EtaOptResult r = optimal_eta(in);
    CHECK(r.branch == 3);
    CHECK(r.latency == doctest::Approx(in.data / in.rate_in).epsilon(1e-12));
    CHECK(r.storage == 0.0);
    CHECK(r.eta ==
          doctest::Approx((in.rate_in - in.rate_backhaul) / ((1.0 - z) * in.rate_in)).epsilon(1e-12));
  }
}

TEST_CASE("closed form equals the dense sweep on random tuples") {
  Rng rng(17);
  for (int i = 0; i < 400; ++i) {
    EtaOptInput in = random_input(rng);
    if (in.cpu_freq == 0.0) in.cpu_freq = 1.0;
    EtaOptResult best = optimal_eta(in);
    EtaSweepResult grid = sweep_eta_oracle(in, 1e-3);
    // closed form can only be at least as good, up to grid resolution slack
    CHECK(best.latency <= grid.latency * (1.0 + 1e-9));
    // and the grid value is reachable from the closed form's neighborhood
    CHECK(grid.latency <= best.latency * (1.0 + 5e-3) + 1e-12);
  }
}

TEST_CASE("simultaneous dominance over a fine split grid") {
  Rng rng(23);
  for (int i = 0; i < 60; ++i) {
    EtaOptInput in = random_input(rng);
    if (in.cpu_freq == 0.0) in.cpu_freq = 1.0;
    EtaOptResult best = optimal_eta(in);
    FlowParams p{in.rate_in, in.rate_backhaul, in.cpu_freq, 0.0,
                 in.data, in.intensity, in.output_ratio};
    for (int k = 0; k <= 1000; ++k) {
      p.eta = k / 1000.0;
      DataflowOutcome o = latency_storage_or_inf(p);
      REQUIRE(best.latency <= o.latency * (1.0 + 1e-9) + 1e-9);
      REQUIRE(best.storage <= o.storage + 1e-9 * std::max(1.0, o.storage));
    }
  }
}

TEST_CASE("every closed-form case is exercised by its parameter family") {
  Rng rng(41);
  int expected[9] = {0, 1, 1, 2, 3, 3, 4, 5, 6};
  for (int line = 1; line <= 8; ++line) {
    for (int i = 0; i < 50; ++i) {
      EtaOptInput in = family_input(line, rng);
      EtaOptResult r = optimal_eta(in);
      CAPTURE(line);
      CAPTURE(i);
      CHECK(r.branch == expected[line]);
      // value-level dominance against a coarse sweep
      EtaSweepResult grid = sweep_eta_oracle(in, 1e-3);
      CHECK(r.latency <= grid.latency * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("sweep oracle rejects an out-of-range grid step") {
  EtaOptInput in{2e5, 1e5, 1e8, 1e7, 2000.0, 0.05};
  CHECK_THROWS_AS(sweep_eta_oracle(in, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(sweep_eta_oracle(in, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
