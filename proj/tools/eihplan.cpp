// eihplan: plan hub resources, optimize placement, and reproduce the
// benchmark experiments from scenario files.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eihplan/bench.hpp"
#include "eihplan/config_opt.hpp"
#include "eihplan/placement.hpp"
#include "eihplan/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolve = 2;

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::string loc_text = "0,0";
  std::string angle_unit;
  std::string se_source = "approx";
  std::uint64_t seed = 1;
  double eps = 1e-4;
  int max_iter = 100;
  double grid_res = 25.0;
  int jobs = 1;
  bool verbose = false;
};

eihplan::Location parse_loc(const std::string& text) {
  size_t comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--loc", "expected X,Y");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--loc", "expected numeric X,Y");
  }
}

eihplan::SeSource parse_se(const std::string& text) {
  if (text == "approx") return eihplan::SeSource::approx;
  if (text == "mc") return eihplan::SeSource::mc;
  if (text == "exact") return eihplan::SeSource::exact;
  throw CLI::ValidationError("--se-source", "expected approx, mc or exact");
}

eihplan::Scenario load_scenario(const CommonArgs& args, bool must_validate = true) {
  eihplan::Scenario s = eihplan::read_scenario(args.scenario_path);
  for (const std::string& kv : args.overrides) eihplan::apply_override(s, kv);
  if (!args.angle_unit.empty()) {
    if (args.angle_unit == "deg") s.angle_unit = eihplan::AngleUnit::degrees;
    else if (args.angle_unit == "rad") s.angle_unit = eihplan::AngleUnit::radians;
    else throw CLI::ValidationError("--angle-unit", "expected deg or rad");
  }
  if (must_validate) {
    std::vector<std::string> bad = eihplan::validate(s);
    if (!bad.empty()) {
      std::string msg = "scenario invalid:";
      for (const std::string& b : bad) msg += "\n  " + b;
      throw std::runtime_error(msg);
    }
  }
  return s;
}

std::string join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_scenario = true) {
  auto* opt = cmd->add_option("--scenario", args.scenario_path, "Scenario file path");
  if (needs_scenario) opt->required();
  cmd->add_option("--out", args.out_dir, "Output directory (default .)");
  cmd->add_option("--set", args.overrides,
                  "Scenario override key=value, applied after load (repeatable)");
  cmd->add_option("--loc", args.loc_text, "Hub horizontal location X,Y in meters (default 0,0)");
  cmd->add_option("--seed", args.seed, "Random seed");
  cmd->add_option("--eps", args.eps, "Placement stopping tolerance (default 1e-4)");
  cmd->add_option("--max-iter", args.max_iter, "Placement iteration cap (default 100)");
  cmd->add_option("--grid-res", args.grid_res,
                  "Cost-map grid resolution in meters for bench surfaces (default 25)");
  cmd->add_option("--jobs", args.jobs, "Worker thread cap for grids and sweeps (default 1)");
  cmd->add_option("--angle-unit", args.angle_unit, "Sigmoid angle unit: deg or rad");
  cmd->add_option("--se-source", args.se_source,
                  "Spectral-efficiency model: approx, mc or exact (default approx)");
  cmd->add_flag("-v,--verbose", args.verbose, "Print per-user / per-iteration detail");
}

int run_plan(const CommonArgs& args) {
  eihplan::Scenario s = load_scenario(args);
  eihplan::Location loc = parse_loc(args.loc_text);
  eihplan::OptimalConfig cfg = eihplan::full_configuration(s, loc, parse_se(args.se_source));
  std::string report = eihplan::config_report_text(s, cfg);
  eihplan::write_file(join(args.out_dir, "plan_report.txt"), report);
  eihplan::write_file(join(args.out_dir, "plan_per_user.csv"),
                      eihplan::config_report_csv(s, cfg));
  std::fputs(report.c_str(), stdout);
  if (args.verbose) std::fputs(eihplan::config_report_csv(s, cfg).c_str(), stdout);
  return kExitOk;
}

int run_place(const CommonArgs& args, double audit_grid) {
  eihplan::Scenario s = load_scenario(args);
  eihplan::ScaOptions opt;
  opt.eps = args.eps;
  opt.max_iter = args.max_iter;
  eihplan::PlacementResult res = eihplan::sca_optimize(s, opt);
  eihplan::Baselines bl = eihplan::baselines(s);
  std::string out;
  out += "placement\n";
  out += "  location          = " + eihplan::num(res.location.x) + ", " +
         eihplan::num(res.location.y) + " m\n";
  out += "  cost              = " + eihplan::num(res.cost) + "\n";
  out += "  iterations        = " + std::to_string(res.iterations) + "\n";
  out += "  geometric_center  = cost " +
         eihplan::num(eihplan::direct_cost(bl.geometric_center, s)) + "\n";
  out += "  weighted_centroid = cost " +
         eihplan::num(eihplan::direct_cost(bl.weighted_centroid, s)) + "\n";
  if (audit_grid > 0.0) {
    eihplan::Bounds box{-1000.0, 1000.0, -1000.0, 1000.0};
    eihplan::PlacementResult grid = eihplan::grid_search(s, box, audit_grid, args.jobs);
    double gap = (res.cost - grid.cost) / grid.cost;
    out += "  grid_optimum      = cost " + eihplan::num(grid.cost) + " at " +
           eihplan::num(grid.location.x) + ", " + eihplan::num(grid.location.y) + "\n";
    out += "  gap_vs_grid       = " + eihplan::num(gap * 100.0) + " %\n";
  }
  eihplan::write_file(join(args.out_dir, "place_report.txt"), out);
  eihplan::write_file(join(args.out_dir, "place_trace.csv"), eihplan::sca_trace_csv(res));
  std::fputs(out.c_str(), stdout);
  if (args.verbose) std::fputs(eihplan::sca_trace_csv(res).c_str(), stdout);
  return res.status == eihplan::PlacementStatus::max_iterations ? kExitSolve : kExitOk;
}

int run_surface(const CommonArgs& args, double b_scale) {
  eihplan::Scenario s = load_scenario(args);
  eihplan::Location loc = parse_loc(args.loc_text);
  eihplan::BandwidthPlan bw = eihplan::optimal_bandwidth(s, loc);
  eihplan::BackhaulComputePlan bc = eihplan::optimal_backhaul_compute(s);
  eihplan::Grid1D rs{0.85 * bc.backhaul_total, 1.35 * bc.backhaul_total, 100};
  eihplan::Grid1D f{0.4 * bc.compute_total, 2.2 * bc.compute_total, 100};
  eihplan::LatencySurface surf =
      eihplan::latency_surface(s, loc, b_scale * bw.total, rs, f, args.jobs);
  std::string path = join(args.out_dir, "surface_b" + eihplan::num(b_scale) + ".csv");
  eihplan::write_file(path, eihplan::latency_surface_csv(surf));
  std::printf("surface written: %s (bandwidth_total = %s Hz)\n", path.c_str(),
              eihplan::num(b_scale * bw.total).c_str());
  return kExitOk;
}

int run_bench(const CommonArgs& args, const std::string& experiment, int seeds, int points) {
  eihplan::Scenario s = load_scenario(args);
  eihplan::ExperimentParams prm;
  prm.n_seeds = seeds;
  prm.seed0 = args.seed;
  prm.dmax_points = points;
  prm.loc = parse_loc(args.loc_text);
  prm.sca_eps = args.eps;
  prm.jobs = args.jobs;
  prm.grid_res = args.grid_res;
  eihplan::ExperimentReport rep = eihplan::run_experiment(experiment, s, prm, args.out_dir);
  for (const std::string& f : rep.files) std::printf("wrote %s\n", f.c_str());
  for (const std::string& line : rep.summary) std::printf("%s\n", line.c_str());
  return kExitOk;
}

int run_validate(const CommonArgs& args) {
  eihplan::Scenario s = load_scenario(args, /*must_validate=*/false);
  std::vector<std::string> bad = eihplan::validate(s);
  if (!bad.empty()) {
    std::printf("INVALID: %zu violation(s)\n", bad.size());
    for (const std::string& b : bad) std::printf("  %s\n", b.c_str());
    return kExitUsage;
  }
  std::printf("scenario OK (%zu sensors)\n", s.sensors.size());

  // oracle self-tests on this scenario
  eihplan::Location loc = parse_loc(args.loc_text);
  eihplan::Rng rng(args.seed);
  bool all_ok = true;
  auto report = [&](const char* name, bool ok) {
    std::printf("  %-28s %s\n", name, ok ? "PASS" : "FAIL");
    all_ok = all_ok && ok;
  };

  {  // nu fixed point at this location
    bool ok = true;
    for (const eihplan::Sensor& u : s.sensors) {
      eihplan::ChannelState st = eihplan::channel_state(loc, u, s);
      double nu = eihplan::rate_nu(st.mean_snr);
      ok = ok && std::fabs(nu * (nu - 1.0) - st.mean_snr) <= 1e-12 * st.mean_snr;
    }
    report("nu fixed point", ok);
  }
  {  // analytic pipeline vs fluid oracle on scenario-derived tuples
    bool ok = true;
    for (int t = 0; t < 200 && ok; ++t) {
      const eihplan::Sensor& u = s.sensors[t % s.sensors.size()];
      double r = u.data_volume / s.latency_req;
      eihplan::FlowParams p{r * rng.uniform(0.5, 2.0),
                            r * rng.uniform(0.05, 2.0),
                            u.compute_intensity * r * rng.uniform(0.05, 2.0),
                            rng.uniform(0.0, 1.0),
                            u.data_volume,
                            u.compute_intensity,
                            u.output_ratio};
      eihplan::FluidResult f = eihplan::simulate_fluid(p);
      if (!f.completes) continue;
      eihplan::DataflowOutcome o = eihplan::latency_storage(p);
      ok = std::fabs(o.latency - f.outcome.latency) <= 1e-9 * o.latency &&
           std::fabs(o.storage - f.outcome.storage) <=
               1e-9 * std::max(o.storage, 1e-6 * u.data_volume);
    }
    report("pipeline vs fluid oracle", ok);
  }
  {  // split optimizer vs dense sweep
    bool ok = true;
    for (int t = 0; t < 50 && ok; ++t) {
      const eihplan::Sensor& u = s.sensors[t % s.sensors.size()];
      double r = u.data_volume / s.latency_req;
      eihplan::EtaOptInput in{r * rng.uniform(0.5, 2.0), r * rng.uniform(0.05, 2.0),
                              u.compute_intensity * r * rng.uniform(0.05, 2.0),
                              u.data_volume, u.compute_intensity, u.output_ratio};
      eihplan::EtaOptResult best = eihplan::optimal_eta(in);
      eihplan::EtaSweepResult grid = eihplan::sweep_eta_oracle(in, 1e-3);
      ok = best.latency <= grid.latency * (1.0 + 1e-9);
    }
    report("split optimizer vs sweep", ok);
  }
  {  // threshold rule vs endpoint enumeration
    eihplan::BackhaulComputePlan a = eihplan::optimal_backhaul_compute(s);
    eihplan::LpOracleResult b = eihplan::lp_oracle_p5(s);
    bool ok = std::fabs(a.backhaul_total - b.backhaul_total) <= 1e-12 * a.backhaul_total &&
              std::fabs(a.compute_total - b.compute_total) <=
                  1e-12 * std::max(1.0, a.compute_total);
    report("threshold rule vs lp oracle", ok);
  }
  return all_ok ? kExitOk : kExitUsage;
}

int run_generate(const CommonArgs& args, double dmax, int users) {
  eihplan::Scenario s = eihplan::generate(args.seed, dmax, users);
  std::string path = join(args.out_dir, "scenario_seed" + std::to_string(args.seed) + ".cfg");
  eihplan::save_scenario(s, path);
  std::printf("wrote %s (%d sensors, dmax %s bit)\n", path.c_str(), users,
              eihplan::num(dmax).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-hub resource planning and placement toolkit"};
  app.name("eihplan");
  app.require_subcommand(1);

  CommonArgs args;
  double audit_grid = 0.0;
  double b_scale = 1.0;
  double dmax = 1e8;
  int users = 5;
  int bench_seeds = 50;
  int bench_points = 10;
  std::string experiment;

  CLI::App* plan = app.add_subcommand("plan", "Cost-minimal resource configuration at a location");
  add_common(plan, args);

  CLI::App* place = app.add_subcommand("place", "Optimize the hub location");
  add_common(place, args);
  place->add_option("--audit-grid", audit_grid,
                    "Also run a brute-force grid search at this resolution (m)");

  CLI::App* surface = app.add_subcommand("surface", "Completion-time surface over backhaul/compute");
  add_common(surface, args);
  surface->add_option("--b-scale", b_scale,
                      "Bandwidth total as a multiple of the optimum (default 1)");

  CLI::App* bench = app.add_subcommand("bench", "Reproduce a benchmark experiment");
  add_common(bench, args);
  bench->add_option("experiment", experiment, "One of fig3, fig4, fig5, fig6, fig7")->required();
  bench->add_option("--seeds", bench_seeds, "Topology count for seeded experiments (default 50)");
  bench->add_option("--points", bench_points, "Data-volume sweep points (default 10)");

  CLI::App* validate = app.add_subcommand("validate", "Validate a scenario and run oracle self-tests");
  add_common(validate, args);

  CLI::App* gen = app.add_subcommand("generate", "Write a random scenario file");
  add_common(gen, args, /*needs_scenario=*/false);
  gen->add_option("--dmax", dmax, "Maximum data volume in bits (default 1e8)");
  gen->add_option("--users", users, "Number of sensors (default 5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (plan->parsed()) return run_plan(args);
    if (place->parsed()) return run_place(args, audit_grid);
    if (surface->parsed()) return run_surface(args, b_scale);
    if (bench->parsed()) return run_bench(args, experiment, bench_seeds, bench_points);
    if (validate->parsed()) return run_validate(args);
    if (gen->parsed()) return run_generate(args, dmax, users);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    std::string msg = e.what();
    return msg.find("scenario") == 0 || msg.find("cannot open") == 0 ? kExitUsage : kExitSolve;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolve;
  }
  return kExitUsage;
}
