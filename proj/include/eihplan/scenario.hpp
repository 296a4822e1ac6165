#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eihplan/rng.hpp"
#include "eihplan/textio.hpp"
#include "eihplan/units.hpp"

namespace eihplan {

enum class AngleUnit { degrees, radians };
enum class NoiseModel { fixed_power, psd };

// One ground sensor: position, task data volume and its compute profile.
struct Sensor {
  int id = 0;
  double pos_x = 0.0;          // m
  double pos_y = 0.0;          // m
  double data_volume = 0.0;    // bits
  double compute_intensity = 0.0;  // CPU cycles per bit
  double output_ratio = 0.0;   // compute output bits per input bit, in (0,1)
  double tx_power = 0.0;       // W
};

// Cost weights of the four provisioned resources, in SI units
// (per Hz, per bit/s, per cycle/s, per bit).
struct CostWeights {
  double bandwidth = 0.0;
  double backhaul = 0.0;
  double compute = 0.0;
  double storage = 0.0;
};

struct Scenario {
  std::vector<Sensor> sensors;
  double latency_req = 0.0;   // s
  double uav_height = 0.0;    // m
  double carrier_freq = 0.0;  // Hz
  double light_speed = 0.0;   // m/s
  double channel_a = 0.0;     // sigmoid shape constants of the LoS model
  double channel_b = 0.0;
  double eta_los = 0.0;       // excess path loss, dB
  double eta_nlos = 0.0;      // dB
  double noise_power = 0.0;   // W (total noise in fixed_power mode, W/Hz in psd mode)
  CostWeights cost;
  AngleUnit angle_unit = AngleUnit::degrees;
  NoiseModel noise_model = NoiseModel::fixed_power;
};

// UAV horizontal coordinate; height comes from the scenario.
struct Location {
  double x = 0.0;  // m
  double y = 0.0;  // m
};

// Per-user orchestration variables.
struct PerUserAllocation {
  double bandwidth = 0.0;     // Hz
  double backhaul_rate = 0.0; // bit/s
  double cpu_freq = 0.0;      // cycle/s
  double eta = 0.0;           // fraction routed through compute
};

// Provisioned totals plus their weighted cost.
struct ResourceConfig {
  double bandwidth_total = 0.0;  // Hz
  double backhaul_total = 0.0;   // bit/s
  double compute_total = 0.0;    // cycle/s
  double storage_total = 0.0;    // bits
  double cost = 0.0;
};

inline double config_cost(const ResourceConfig& c, const CostWeights& w) {
  return w.bandwidth * c.bandwidth_total + w.backhaul * c.backhaul_total +
         w.compute * c.compute_total + w.storage * c.storage_total;
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> v;
  auto bad = [&](const std::string& msg) { v.push_back(msg); };
  if (!(s.latency_req > 0.0)) bad("latency_req must be positive");
  if (!(s.uav_height > 0.0)) bad("uav_height must be positive");
  if (!(s.carrier_freq > 0.0)) bad("carrier_freq must be positive");
  if (!(s.light_speed > 0.0)) bad("light_speed must be positive");
  if (!(s.noise_power > 0.0)) bad("noise_power must be positive");
  if (!(s.eta_nlos > s.eta_los)) bad("eta_nlos must exceed eta_los");
  if (s.cost.bandwidth < 0.0 || s.cost.backhaul < 0.0 || s.cost.compute < 0.0 ||
      s.cost.storage < 0.0)
    bad("cost weights must be non-negative");
  std::vector<int> ids;
  for (const Sensor& u : s.sensors) {
    std::string tag = "sensor " + std::to_string(u.id) + ": ";
    if (!(u.data_volume > 0.0)) bad(tag + "data_volume must be positive");
    if (!(u.compute_intensity > 0.0)) bad(tag + "compute_intensity must be positive");
    if (!(u.output_ratio > 0.0 && u.output_ratio < 1.0)) bad(tag + "output_ratio outside (0,1)");
    if (!(u.tx_power > 0.0)) bad(tag + "tx_power must be positive");
    if (!std::isfinite(u.pos_x) || !std::isfinite(u.pos_y)) bad(tag + "position must be finite");
    ids.push_back(u.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) bad("sensor ids not unique");
  return v;
}

// ---------------------------------------------------------------------------
// Random generation matching the reference simulation setup.

inline Scenario default_parameters() {
  Scenario s;
  s.latency_req = 100.0;
  s.uav_height = 1000.0;
  s.carrier_freq = 5.8e9;
  s.light_speed = 3.0e8;
  s.channel_a = 4.880;
  s.channel_b = 0.429;
  s.eta_los = 0.1;
  s.eta_nlos = 21.0;
  s.noise_power = dbm_to_watt(-114.0);
  s.cost.bandwidth = 1.0 / kMHz;       // 1 per MHz
  s.cost.backhaul = 3.0 / (kMbit);     // 3 per Mbit/s
  s.cost.compute = 1.0e-3 / kMcycle;   // 1e-3 per Mcycle/s
  s.cost.storage = 1.0 / kMbit;        // 1 per Mbit (cost visible only off-optimum)
  s.angle_unit = AngleUnit::degrees;
  s.noise_model = NoiseModel::fixed_power;
  return s;
}

inline Scenario generate(std::uint64_t seed, double dmax, int n_users) {
  if (!(dmax > 0.0)) throw std::invalid_argument("generate: dmax must be positive");
  if (n_users < 1) throw std::invalid_argument("generate: n_users must be at least 1");
  Scenario s = default_parameters();
  Rng rng(Rng::derive(seed, 0x5ce7a610));
  s.sensors.reserve(static_cast<size_t>(n_users));
  for (int i = 0; i < n_users; ++i) {
    Sensor u;
    u.id = i + 1;
    u.data_volume = rng.uniform(0.1 * dmax, dmax);
    u.compute_intensity = rng.uniform(1000.0, 5000.0);
    u.output_ratio = rng.uniform(0.01, 0.1);
    double radius = 1000.0 * std::sqrt(rng.uniform());
    double phase = 2.0 * kPi * rng.uniform();
    u.pos_x = radius * std::cos(phase);
    u.pos_y = radius * std::sin(phase);
    u.tx_power = 1.0;
    s.sensors.push_back(u);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Scenario file format: "key = value [unit]" lines plus one "sensor = ..."
// line per sensor. See docs/scenario_format.md. The writer emits base SI
// units with round-trip-exact numbers; the reader additionally accepts the
// scaled units listed below.

namespace detail {

struct UnitTable {
  std::map<std::string, double> mult;
  bool dbm_ok = false;
};

inline double parse_quantity(const std::string& text, const UnitTable& units,
                             const std::string& key) {
  std::istringstream in(text);
  double value = 0.0;
  if (!(in >> value)) throw std::runtime_error("scenario: bad number for " + key);
  std::string unit;
  in >> unit;
  if (unit.empty()) return value;
  if (unit == "dBm" && units.dbm_ok) return dbm_to_watt(value);
  auto it = units.mult.find(unit);
  if (it == units.mult.end())
    throw std::runtime_error("scenario: unknown unit '" + unit + "' for " + key);
  return value * it->second;
}

inline const UnitTable& time_units() {
  static UnitTable t{{{"s", 1.0}, {"ms", 1e-3}, {"min", 60.0}}, false};
  return t;
}
inline const UnitTable& length_units() {
  static UnitTable t{{{"m", 1.0}, {"km", 1e3}}, false};
  return t;
}
inline const UnitTable& freq_units() {
  static UnitTable t{{{"Hz", 1.0}, {"kHz", kHz}, {"MHz", kMHz}, {"GHz", kGHz}}, false};
  return t;
}
inline const UnitTable& speed_units() {
  static UnitTable t{{{"m/s", 1.0}, {"km/s", 1e3}}, false};
  return t;
}
inline const UnitTable& power_units() {
  // W/Hz and dBm/Hz apply when noise_model = psd; numerically identical scale.
  static UnitTable t{{{"W", 1.0}, {"mW", 1e-3}, {"W/Hz", 1.0}, {"mW/Hz", 1e-3}}, true};
  return t;
}
inline const UnitTable& db_units() {
  static UnitTable t{{{"dB", 1.0}}, false};
  return t;
}
inline const UnitTable& plain_units() {
  static UnitTable t{{}, false};
  return t;
}
inline const UnitTable& data_units() {
  static UnitTable t{{{"bit", 1.0}, {"kbit", kKbit}, {"Mbit", kMbit}, {"Gbit", kGbit}}, false};
  return t;
}
inline const UnitTable& intensity_units() {
  static UnitTable t{{{"cycles/bit", 1.0}}, false};
  return t;
}
inline const UnitTable& w_bandwidth_units() {
  static UnitTable t{{{"per_Hz", 1.0}, {"per_MHz", 1.0 / kMHz}}, false};
  return t;
}
inline const UnitTable& w_backhaul_units() {
  static UnitTable t{{{"per_bit/s", 1.0}, {"per_Mbit/s", 1.0 / kMbit}}, false};
  return t;
}
inline const UnitTable& w_compute_units() {
  static UnitTable t{{{"per_cycle/s", 1.0}, {"per_Mcycle/s", 1.0 / kMcycle}}, false};
  return t;
}
inline const UnitTable& w_storage_units() {
  static UnitTable t{{{"per_bit", 1.0}, {"per_Mbit", 1.0 / kMbit}}, false};
  return t;
}

inline std::vector<std::string> split_csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    size_t b = f.find_first_not_of(" \t");
    size_t e = f.find_last_not_of(" \t");
    f = (b == std::string::npos) ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace detail

inline std::string write_scenario(const Scenario& s) {
  std::string out;
  out += "# eihplan scenario v1\n";
  auto kv = [&](const std::string& key, double v, const std::string& unit) {
    out += key + " = " + num_exact(v) + (unit.empty() ? "" : " " + unit) + "\n";
  };
  kv("latency_req", s.latency_req, "s");
  kv("uav_height", s.uav_height, "m");
  kv("carrier_freq", s.carrier_freq, "Hz");
  kv("light_speed", s.light_speed, "m/s");
  kv("channel_a", s.channel_a, "");
  kv("channel_b", s.channel_b, "");
  kv("eta_los", s.eta_los, "dB");
  kv("eta_nlos", s.eta_nlos, "dB");
  kv("noise_power", s.noise_power, s.noise_model == NoiseModel::psd ? "W/Hz" : "W");
  out += std::string("noise_model = ") +
         (s.noise_model == NoiseModel::psd ? "psd" : "fixed_power") + "\n";
  out += std::string("angle_unit = ") +
         (s.angle_unit == AngleUnit::radians ? "rad" : "deg") + "\n";
  kv("cost_bandwidth", s.cost.bandwidth, "per_Hz");
  kv("cost_backhaul", s.cost.backhaul, "per_bit/s");
  kv("cost_compute", s.cost.compute, "per_cycle/s");
  kv("cost_storage", s.cost.storage, "per_bit");
  for (const Sensor& u : s.sensors) {
    out += "sensor = " + std::to_string(u.id) + ", " + num_exact(u.pos_x) + " m, " +
           num_exact(u.pos_y) + " m, " + num_exact(u.data_volume) + " bit, " +
           num_exact(u.compute_intensity) + " cycles/bit, " + num_exact(u.output_ratio) +
           ", " + num_exact(u.tx_power) + " W\n";
  }
  return out;
}

inline Scenario read_scenario_text(const std::string& text) {
  using namespace detail;
  Scenario s = default_parameters();
  s.sensors.clear();
  std::istringstream in(text);
  std::string line;
  // noise is parsed after noise_model is known; remember the raw field
  std::string noise_raw;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("scenario line " + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& t) {
      size_t x = t.find_first_not_of(" \t\r");
      size_t y = t.find_last_not_of(" \t\r");
      t = (x == std::string::npos) ? std::string() : t.substr(x, y - x + 1);
    };
    trim(key);
    trim(val);
    if (key == "latency_req") s.latency_req = parse_quantity(val, time_units(), key);
    else if (key == "uav_height") s.uav_height = parse_quantity(val, length_units(), key);
    else if (key == "carrier_freq") s.carrier_freq = parse_quantity(val, freq_units(), key);
    else if (key == "light_speed") s.light_speed = parse_quantity(val, speed_units(), key);
    else if (key == "channel_a") s.channel_a = parse_quantity(val, plain_units(), key);
    else if (key == "channel_b") s.channel_b = parse_quantity(val, plain_units(), key);
    else if (key == "eta_los") s.eta_los = parse_quantity(val, db_units(), key);
    else if (key == "eta_nlos") s.eta_nlos = parse_quantity(val, db_units(), key);
    else if (key == "noise_power") noise_raw = val;
    else if (key == "noise_model") {
      if (val == "fixed_power") s.noise_model = NoiseModel::fixed_power;
      else if (val == "psd") s.noise_model = NoiseModel::psd;
      else throw std::runtime_error("scenario: unknown noise_model '" + val + "'");
    } else if (key == "angle_unit") {
      if (val == "deg") s.angle_unit = AngleUnit::degrees;
      else if (val == "rad") s.angle_unit = AngleUnit::radians;
      else throw std::runtime_error("scenario: unknown angle_unit '" + val + "'");
    } else if (key == "cost_bandwidth") s.cost.bandwidth = parse_quantity(val, w_bandwidth_units(), key);
    else if (key == "cost_backhaul") s.cost.backhaul = parse_quantity(val, w_backhaul_units(), key);
    else if (key == "cost_compute") s.cost.compute = parse_quantity(val, w_compute_units(), key);
    else if (key == "cost_storage") s.cost.storage = parse_quantity(val, w_storage_units(), key);
    else if (key == "sensor") {
      auto f = split_csv_fields(val);
      if (f.size() != 7)
        throw std::runtime_error("scenario: sensor line needs 7 fields (id, x, y, data, intensity, output_ratio, power)");
      Sensor u;
      u.id = std::stoi(f[0]);
      u.pos_x = parse_quantity(f[1], length_units(), "sensor.x");
      u.pos_y = parse_quantity(f[2], length_units(), "sensor.y");
      u.data_volume = parse_quantity(f[3], data_units(), "sensor.data");
      u.compute_intensity = parse_quantity(f[4], intensity_units(), "sensor.intensity");
      u.output_ratio = parse_quantity(f[5], plain_units(), "sensor.output_ratio");
      u.tx_power = parse_quantity(f[6], power_units(), "sensor.power");
      s.sensors.push_back(u);
    } else {
      throw std::runtime_error("scenario: unknown key '" + key + "'");
    }
  }
  if (!noise_raw.empty()) s.noise_power = parse_quantity(noise_raw, power_units(), "noise_power");
  return s;
}

inline Scenario read_scenario(const std::string& path) {
  return read_scenario_text(read_file(path));
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  write_file(path, write_scenario(s));
}

// Applies a "key=value" override as if that line replaced the file's line.
inline void apply_override(Scenario& s, const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("override must look like key=value: " + assignment);
  Scenario patched = read_scenario_text(
      write_scenario(s) + assignment.substr(0, eq) + " = " + assignment.substr(eq + 1) + "\n");
  s = patched;
}

}  // namespace eihplan
