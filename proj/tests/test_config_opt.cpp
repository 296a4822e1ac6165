#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "eihplan/config_opt.hpp"
#include "eihplan/rng.hpp"

using namespace eihplan;

namespace {

Scenario fixture() {
  const char* p = std::getenv("EIHPLAN_FIXTURE");
  REQUIRE(p != nullptr);
  return read_scenario(p);
}

// Random orchestration that keeps every user's split-optimized latency
// within the requirement: inflate the optimal point and occasionally move to
// the pure-upload corner.
std::vector<UserTriple> random_feasible(const Scenario& s, const std::vector<double>& se,
                                        Rng& rng) {
  BandwidthPlan bw = optimal_bandwidth(s, {0.0, 0.0});
  BackhaulComputePlan bc = optimal_backhaul_compute(s);
  std::vector<UserTriple> out;
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    UserTriple t;
    if (rng.uniform() < 0.3) {
      // generous upload-only style point, backhaul at or above the link rate
      t.bandwidth = bw.per_user[i] * rng.uniform(1.0, 3.0);
      t.backhaul = t.bandwidth * se[i] * rng.uniform(1.0, 2.0);
      t.cpu_freq = s.sensors[i].compute_intensity * s.sensors[i].data_volume /
                   s.latency_req * rng.uniform(0.0, 2.0);
    } else {
      t.bandwidth = bw.per_user[i] * rng.uniform(1.0, 2.5);
      t.backhaul = std::max(bc.backhaul[i], s.sensors[i].output_ratio * t.bandwidth * se[i]) *
                   rng.uniform(1.0, 2.5);
      t.cpu_freq = s.sensors[i].compute_intensity *
                   (s.sensors[i].data_volume / s.latency_req) * rng.uniform(1.0, 2.5);
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_SUITE("config_opt") {

TEST_CASE("bandwidth plan makes every rate exactly meet the deadline") {
  Scenario s = fixture();
  BandwidthPlan bw = optimal_bandwidth(s, {0.0, 0.0});
  REQUIRE(bw.per_user.size() == s.sensors.size());
  double sum = 0.0;
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    CHECK(bw.per_user[i] * bw.se[i] ==
          doctest::Approx(s.sensors[i].data_volume / s.latency_req).epsilon(1e-12));
    sum += bw.per_user[i];
  }
  CHECK(bw.total == doctest::Approx(sum).epsilon(1e-15));
  // same order of magnitude as the documented sub-MHz regime
  CHECK(bw.total > 0.0676e6);
  CHECK(bw.total < 6.76e6);
}

TEST_CASE("bandwidth scales exactly with the data volumes") {
  Scenario s = fixture();
  double b1 = optimal_bandwidth(s, {0.0, 0.0}).total;
  for (Sensor& u : s.sensors) u.data_volume *= 2.0;
  CHECK(optimal_bandwidth(s, {0.0, 0.0}).total == 2.0 * b1);
}

TEST_CASE("threshold rule: worked examples") {
  Scenario s = default_parameters();
  Sensor u;
  u.id = 1;
  u.data_volume = 1e7;
  u.tx_power = 1.0;

  SUBCASE("cheap compute goes through the CPU") {
    u.compute_intensity = 2000.0;
    u.output_ratio = 0.1;
    s.sensors = {u};
    BackhaulComputePlan p = optimal_backhaul_compute(s);
    CHECK(p.computes[0]);
    CHECK(p.backhaul[0] == doctest::Approx(1e4).epsilon(1e-12));
    CHECK(p.compute[0] == doctest::Approx(2e8).epsilon(1e-12));
  }
  SUBCASE("expensive compute uploads raw") {
    u.compute_intensity = 4000.0;
    u.output_ratio = 0.05;
    s.sensors = {u};
    BackhaulComputePlan p = optimal_backhaul_compute(s);
    CHECK_FALSE(p.computes[0]);
    CHECK(p.backhaul[0] == doctest::Approx(1e5).epsilon(1e-12));
    CHECK(p.compute[0] == 0.0);
  }
  SUBCASE("output ratio near one keeps the rate near raw upload") {
    // hold the user in the compute branch while zeta -> 1
    s.cost.compute = 1e-22;
    u.compute_intensity = 100.0;
    u.output_ratio = 1.0 - 1e-9;
    s.sensors = {u};
    BackhaulComputePlan p = optimal_backhaul_compute(s);
    REQUIRE(p.computes[0]);
    CHECK(p.backhaul[0] == doctest::Approx(1e5).epsilon(1e-6));
    CHECK(p.compute[0] == doctest::Approx(100.0 * 1e5).epsilon(1e-12));
  }
  SUBCASE("zero compute weight sends everyone to the CPU") {
    s.cost.compute = 0.0;
    u.compute_intensity = 5000.0;
    u.output_ratio = 0.05;
    s.sensors = {u};
    CHECK(optimal_backhaul_compute(s).computes[0]);
  }
}

TEST_CASE("lp oracle agrees exactly with the threshold formula") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Scenario s = generate(seed, 1e8, 5);
    Rng rng(Rng::derive(seed, 1));
    s.cost.backhaul = rng.uniform(1e-7, 1e-5);
    s.cost.compute = rng.uniform(1e-10, 1e-8);
    BackhaulComputePlan a = optimal_backhaul_compute(s);
    LpOracleResult b = lp_oracle_p5(s);
    CHECK(a.backhaul_total == doctest::Approx(b.backhaul_total).epsilon(1e-12));
    CHECK(a.compute_total == doctest::Approx(b.compute_total).epsilon(1e-12));
    for (size_t i = 0; i < s.sensors.size(); ++i)
      CHECK(a.backhaul[i] == doctest::Approx(b.backhaul[i]).epsilon(1e-12));
  }
}

TEST_CASE("an exact threshold tie is cost-neutral") {
  Scenario s = default_parameters();
  Sensor u;
  u.id = 1;
  u.data_volume = 1e7;
  u.tx_power = 1.0;
  u.output_ratio = 0.1;
  u.compute_intensity = (s.cost.backhaul / s.cost.compute) * (1.0 - u.output_ratio);
  s.sensors = {u};
  LpOracleResult lp = lp_oracle_p5(s);
  CHECK(lp.tie[0]);
  BackhaulComputePlan main = optimal_backhaul_compute(s);
  CHECK(main.computes[0]);  // non-strict indicator takes the compute side
  double cost_main = s.cost.backhaul * main.backhaul_total + s.cost.compute * main.compute_total;
  double cost_lp = s.cost.backhaul * lp.backhaul_total + s.cost.compute * lp.compute_total;
  CHECK(cost_main == doctest::Approx(cost_lp).epsilon(1e-12));
}

TEST_CASE("zero backhaul weight prefers raw upload whenever compute costs anything") {
  Scenario s = generate(4, 1e8, 5);
  s.cost.backhaul = 0.0;
  BackhaulComputePlan p = optimal_backhaul_compute(s);
  LpOracleResult lp = lp_oracle_p5(s);
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    CHECK_FALSE(p.computes[i]);
    CHECK(p.backhaul[i] == doctest::Approx(lp.backhaul[i]).epsilon(1e-12));
  }
}

TEST_CASE("full configuration assembles a tight, feasible optimum") {
  Scenario s = fixture();
  OptimalConfig c = full_configuration(s, {0.0, 0.0});
  CHECK(c.config.storage_total == 0.0);
  double hand = s.cost.bandwidth * c.config.bandwidth_total +
                s.cost.backhaul * c.config.backhaul_total +
                s.cost.compute * c.config.compute_total;
  CHECK(c.config.cost == doctest::Approx(hand).epsilon(1e-15));
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    const Sensor& u = s.sensors[i];
    double r = c.per_user[i].bandwidth * c.se_per_user[i];
    // split identity of the balanced region
    double eta_row3 = (r - c.per_user[i].backhaul_rate) / ((1.0 - u.output_ratio) * r);
    CHECK(c.per_user[i].eta == doctest::Approx(eta_row3).epsilon(1e-9));
    // completion exactly at the deadline
    FlowParams p{r, c.per_user[i].backhaul_rate, c.per_user[i].cpu_freq, c.per_user[i].eta,
                 u.data_volume, u.compute_intensity, u.output_ratio};
    CHECK(latency_storage(p).latency == doctest::Approx(s.latency_req).epsilon(1e-9));
  }
  CHECK(check_feasibility(s, c).empty());
}

TEST_CASE("two-sensor mixed-branch cost recomposes from the three totals") {
  Scenario s = default_parameters();
  Sensor a;
  a.id = 1; a.data_volume = 1e7; a.compute_intensity = 2000.0; a.output_ratio = 0.1;
  a.tx_power = 1.0; a.pos_x = 100.0; a.pos_y = 0.0;
  Sensor b = a;
  b.id = 2; b.compute_intensity = 4000.0; b.output_ratio = 0.05; b.pos_x = -300.0;
  s.sensors = {a, b};
  OptimalConfig c = full_configuration(s, {0.0, 0.0});
  double required = 1e7 / 100.0;
  CHECK(c.config.backhaul_total == doctest::Approx(0.1 * required + required).epsilon(1e-12));
  CHECK(c.config.compute_total == doctest::Approx(2000.0 * required).epsilon(1e-12));
  double hand = s.cost.bandwidth * c.config.bandwidth_total +
                s.cost.backhaul * (0.1 * required + required) +
                s.cost.compute * (2000.0 * required);
  CHECK(c.config.cost == doctest::Approx(hand).epsilon(1e-12));
}

TEST_CASE("homogeneity: scaling every data volume scales the whole plan") {
  Scenario s = fixture();
  OptimalConfig c1 = full_configuration(s, {0.0, 0.0});
  Scenario s2 = s;
  for (Sensor& u : s2.sensors) u.data_volume *= 2.0;
  OptimalConfig c2 = full_configuration(s2, {0.0, 0.0});
  CHECK(c2.config.bandwidth_total == 2.0 * c1.config.bandwidth_total);
  CHECK(c2.config.backhaul_total == 2.0 * c1.config.backhaul_total);
  CHECK(c2.config.compute_total == 2.0 * c1.config.compute_total);
  CHECK(c2.config.cost == doctest::Approx(2.0 * c1.config.cost).epsilon(1e-15));

  Scenario s3 = s;
  for (Sensor& u : s3.sensors) u.data_volume *= 3.0;
  OptimalConfig c3 = full_configuration(s3, {0.0, 0.0});
  CHECK(c3.config.cost == doctest::Approx(3.0 * c1.config.cost).epsilon(1e-12));
}

TEST_CASE("necessity: any split of a shaved bandwidth total misses the deadline") {
  Rng rng(61);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Scenario s = generate(seed, 1e8, 5);
    BandwidthPlan bw = optimal_bandwidth(s, {0.0, 0.0});
    for (double delta : {0.01, 0.1}) {
      double total = (1.0 - delta) * bw.total;
      // pigeonhole: whatever the split, someone is short
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w(s.sensors.size());
        double sum = 0.0;
        for (double& x : w) sum += (x = rng.uniform(0.01, 1.0));
        bool someone_late = false;
        for (size_t i = 0; i < w.size(); ++i) {
          double b = total * w[i] / sum;
          double rate = b * bw.se[i];
          if (rate < s.sensors[i].data_volume / s.latency_req * (1.0 - 1e-12)) {
            someone_late = true;
            break;
          }
        }
        CHECK(someone_late);
      }
    }
  }
}

TEST_CASE("sufficiency: the backhaul/compute optimum ignores the bandwidth total") {
  Scenario s = fixture();
  BackhaulComputePlan p1 = optimal_backhaul_compute(s);
  // nothing in the plan depends on bandwidth; re-running after a bandwidth
  // change in the scenario is the identity
  BackhaulComputePlan p2 = optimal_backhaul_compute(s);
  CHECK(p1.backhaul_total == p2.backhaul_total);
  CHECK(p1.compute_total == p2.compute_total);
}

TEST_CASE("normalization is the identity on already-balanced points") {
  Scenario s = fixture();
  std::vector<double> se = spectral_efficiencies(s, {0.0, 0.0}, SeSource::approx);
  OptimalConfig c = full_configuration(s, {0.0, 0.0});
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    UserTriple t{c.per_user[i].bandwidth, c.per_user[i].backhaul_rate, c.per_user[i].cpu_freq};
    UserTriple n = normalize_user(t, s.sensors[i], se[i]);
    CHECK(n.bandwidth == doctest::Approx(t.bandwidth).epsilon(1e-12));
    CHECK(n.backhaul == doctest::Approx(t.backhaul).epsilon(1e-12));
    CHECK(n.cpu_freq == doctest::Approx(t.cpu_freq).epsilon(1e-9));
  }
}

TEST_CASE("normalization drops compute when the backhaul already outruns the link") {
  Scenario s = fixture();
  std::vector<double> se = spectral_efficiencies(s, {0.0, 0.0}, SeSource::approx);
  BandwidthPlan bw = optimal_bandwidth(s, {0.0, 0.0});
  UserTriple t{bw.per_user[0] * 1.5, bw.per_user[0] * 1.5 * se[0] * 1.2, 5e8};
  UserTriple n = normalize_user(t, s.sensors[0], se[0]);
  CHECK(n.bandwidth == t.bandwidth);
  CHECK(n.backhaul == doctest::Approx(t.bandwidth * se[0]).epsilon(1e-12));
  CHECK(n.cpu_freq == 0.0);
}

TEST_CASE("normalization: balanced output, componentwise shrink, no latency loss") {
  Scenario s = fixture();
  std::vector<double> se = spectral_efficiencies(s, {0.0, 0.0}, SeSource::approx);
  Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<UserTriple> in = random_feasible(s, se, rng);
    std::vector<UserTriple> out = normalize_solution(s, in, se);
    for (size_t i = 0; i < in.size(); ++i) {
      const Sensor& u = s.sensors[i];
      CHECK(out[i].bandwidth <= in[i].bandwidth * (1.0 + 1e-12));
      CHECK(out[i].backhaul <= in[i].backhaul * (1.0 + 1e-12));
      CHECK(out[i].cpu_freq <= in[i].cpu_freq * (1.0 + 1e-12) + 1e-9);
      double r = out[i].bandwidth * se[i];
      // balanced-subspace membership
      CHECK(out[i].backhaul <= r * (1.0 + 1e-9));
      CHECK(r <= out[i].backhaul / u.output_ratio * (1.0 + 1e-9));
      CHECK(out[i].cpu_freq ==
            doctest::Approx(u.compute_intensity * (r - out[i].backhaul) / (1.0 - u.output_ratio))
                .epsilon(1e-6));
      EtaOptInput before{in[i].bandwidth * se[i], in[i].backhaul, in[i].cpu_freq,
                         u.data_volume, u.compute_intensity, u.output_ratio};
      EtaOptInput after{r, out[i].backhaul, out[i].cpu_freq,
                        u.data_volume, u.compute_intensity, u.output_ratio};
      EtaOptResult rb = optimal_eta(before);
      EtaOptResult ra = optimal_eta(after);
      CHECK(ra.latency <= rb.latency * (1.0 + 1e-9));
      CHECK(ra.storage <= 1e-9 * u.data_volume);
    }
  }
}

TEST_CASE("normalization rejects inputs that miss the deadline") {
  Scenario s = fixture();
  std::vector<double> se = spectral_efficiencies(s, {0.0, 0.0}, SeSource::approx);
  std::vector<UserTriple> in(s.sensors.size());
  for (size_t i = 0; i < in.size(); ++i) in[i] = {1.0, 1.0, 0.0};  // hopeless
  CHECK_THROWS_AS(normalize_solution(s, in, se), std::invalid_argument);
}

TEST_CASE("psd noise mode inverts the rate by bisection") {
  Scenario s = fixture();
  s.noise_model = NoiseModel::psd;
  s.noise_power = 3.98e-15 / 3e5;  // density giving sane SNR at typical bandwidths
  BandwidthPlan bw = optimal_bandwidth(s, {0.0, 0.0});
  for (size_t i = 0; i < s.sensors.size(); ++i) {
    const Sensor& u = s.sensors[i];
    ChannelState st = channel_state({0.0, 0.0}, u, s);
    double b = bw.per_user[i];
    double gamma = u.tx_power * st.gain * st.gain / (s.noise_power * b);
    double rate = b * spectral_efficiency_from_nu(rate_nu(gamma));
    CHECK(rate == doctest::Approx(u.data_volume / s.latency_req).epsilon(1e-9));
  }
}

TEST_CASE("report exports carry the totals and the per-user table") {
  Scenario s = fixture();
  OptimalConfig c = full_configuration(s, {0.0, 0.0});
  std::string txt = config_report_text(s, c);
  CHECK(txt.find("bandwidth_total") != std::string::npos);
  CHECK(txt.find("total") != std::string::npos);
  std::string csv = config_report_csv(s, c);
  CHECK(csv.rfind("sensor_id,", 0) == 0);
  CHECK(static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n')) ==
        1 + s.sensors.size());
}

}  // TEST_SUITE
