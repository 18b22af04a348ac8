// Simulation and verification front-end: runs closed-loop scenarios, sweeps,
// solver cross-checks, and a quick per-step timing report.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtmpc/bnb_solver.hpp"
#include "dtmpc/config_io.hpp"
#include "dtmpc/conic_solver.hpp"
#include "dtmpc/instance_gen.hpp"
#include "dtmpc/sim_harness.hpp"

namespace {

using namespace dtmpc;
namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

RunConfig load_config(const CommonOpts& opts) {
  RunConfig cfg =
      opts.config_path.empty() ? default_run_config() : load_run_config(opts.config_path);
  if (!opts.mode.empty()) cfg.controller.mode = parse_mode(opts.mode);
  if (opts.seed) cfg.scenario.rng_seed = *opts.seed;
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  return cfg;
}

void write_summary(const Metrics& m, const RunConfig& cfg, const std::string& path) {
  nlohmann::json j;
  j["f_sw_hz"] = m.f_sw_hz;
  j["mean_abs_torque_err"] = m.mean_abs_torque_err;
  j["max_abs_torque_err"] = m.max_abs_torque_err;
  j["mean_abs_flux_err"] = m.mean_abs_flux_err;
  j["max_abs_flux_err"] = m.max_abs_flux_err;
  j["max_np_steady"] = m.max_np_steady;
  j["np_at_step"] = m.np_at_step;
  j["corr_time_np"] = m.corr_time_np;
  j["multilevel_jumps"] = m.multilevel_jumps;
  j["mode"] = mode_name(cfg.controller.mode);
  j["rng_seed"] = cfg.scenario.rng_seed;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

int cmd_run(const CommonOpts& opts) {
  const RunConfig cfg = load_config(opts);
  fs::create_directories(cfg.output_dir);

  const auto [trace, metrics] = run_scenario(cfg.scenario, cfg.controller, cfg.machine);
  const std::string trace_path = cfg.output_dir + "/trace.csv";
  const std::string summary_path = cfg.output_dir + "/metrics.json";
  write_trace_csv(trace, trace_path);
  write_summary(metrics, cfg, summary_path);

  std::printf("mode                 %s\n", mode_name(cfg.controller.mode).c_str());
  std::printf("steps                %zu\n", trace.steps.size());
  std::printf("f_sw_hz              %.1f\n", metrics.f_sw_hz);
  std::printf("mean_abs_torque_err  %.5f\n", metrics.mean_abs_torque_err);
  std::printf("mean_abs_flux_err    %.5f\n", metrics.mean_abs_flux_err);
  std::printf("max_np_steady        %llu\n",
              static_cast<unsigned long long>(metrics.max_np_steady));
  std::printf("np_at_step           %llu\n",
              static_cast<unsigned long long>(metrics.np_at_step));
  std::printf("corr_time_np         %.4f\n", metrics.corr_time_np);
  std::printf("trace                %s\n", trace_path.c_str());
  std::printf("summary              %s\n", summary_path.c_str());
  return 0;
}

int cmd_oracle_check(int N, int num_instances, std::uint64_t seed) {
  if (N < 1 || N > 4) {
    std::fprintf(stderr, "oracle-check: N must be in [1, 4] (exhaustive guard)\n");
    return 2;
  }
  const MachineParams params;
  const OperatingPoint op;
  const DiscreteModel model = build_discrete_model(params, op, 25e-6);
  const HorizonMaps maps = build_horizon_maps(model, N);
  ControllerWeights weights;
  weights.N = N;

  InstanceGenerator gen(seed);
  int bnb_pass = 0, sandwich_pass = 0;
  SolverConfig sdp_cfg;
  sdp_cfg.max_iters = 2000;

  std::printf("%-6s %-14s %-14s %-12s %-12s %s\n", "case", "f_exhaustive", "f_bnb", "f_lower",
              "f_extracted", "status");
  for (int i = 0; i < num_instances; ++i) {
    const ObjectiveData data = gen.random_objective(maps, model, params.T_fct(), weights);
    const auto [U_opt, f_opt] = exhaustive_search(data);

    BnbConfig bnb_cfg;  // unlimited
    const BnbResult bnb = branch_and_bound(data, SwitchSequence::Zero(3 * N), bnb_cfg);
    const bool bnb_ok = std::abs(bnb.f_inc - f_opt) <= 1e-9 * std::max(1.0, f_opt);

    const SolveReport report = solve(build_sdp(data), sdp_cfg);
    const SwitchSequence U_sdp = extract(report.Theta, ExtractionMethod::FirstColumn, 1e-2);
    const GapBound gap = gap_bound(U_sdp, report.Theta, data);
    const bool sandwich_ok = gap.lower <= f_opt + 1e-3 && gap.upper >= gap.lower - 1e-3;

    bnb_pass += bnb_ok;
    sandwich_pass += sandwich_ok;
    std::printf("%-6d %-14.8f %-14.8f %-12.6f %-12.6f %s\n", i, f_opt, bnb.f_inc, gap.lower,
                gap.upper, bnb_ok && sandwich_ok ? "pass" : "FAIL");
  }
  std::printf("bnb-vs-exhaustive: %d/%d   sdp-sandwich: %d/%d\n", bnb_pass, num_instances,
              sandwich_pass, num_instances);
  return (bnb_pass == num_instances && sandwich_pass == num_instances) ? 0 : 1;
}

int cmd_sweep(const CommonOpts& opts, const std::string& parameter,
              const std::vector<std::string>& values) {
  if (values.empty()) {
    std::fprintf(stderr, "sweep: empty value list\n");
    return 2;
  }
  const RunConfig base = load_config(opts);
  fs::create_directories(base.output_dir);

  std::printf("%-14s %-10s %-20s %-14s %s\n", parameter.c_str(), "f_sw_hz",
              "mean_abs_torque_err", "max_np_steady", "np_at_step");
  for (const std::string& value : values) {
    RunConfig cfg = base;
    if (parameter == "lambda_u") {
      cfg.controller.weights.lambda_u = std::stod(value);
    } else if (parameter == "n_p_max") {
      cfg.controller.bnb.n_p_max =
          value == "unlimited" ? BnbConfig::unlimited : std::stoull(value);
    } else {
      std::fprintf(stderr, "sweep: unsupported parameter '%s' (lambda_u, n_p_max)\n",
                   parameter.c_str());
      return 2;
    }
    const auto [trace, metrics] = run_scenario(cfg.scenario, cfg.controller, cfg.machine);
    write_trace_csv(trace, base.output_dir + "/trace_" + parameter + "_" + value + ".csv");
    std::printf("%-14s %-10.1f %-20.5f %-14llu %llu\n", value.c_str(), metrics.f_sw_hz,
                metrics.mean_abs_torque_err,
                static_cast<unsigned long long>(metrics.max_np_steady),
                static_cast<unsigned long long>(metrics.np_at_step));
  }
  return 0;
}

int cmd_bench(const CommonOpts& opts, int num_instances) {
  const RunConfig cfg = load_config(opts);
  const OperatingPoint op{cfg.scenario.omega_r};
  const DiscreteModel model = build_discrete_model(cfg.machine, op, cfg.scenario.T_c);
  const HorizonMaps maps = build_horizon_maps(model, cfg.controller.weights.N);

  InstanceGenerator gen(cfg.scenario.rng_seed);
  double bnb_total = 0.0, sdp_total = 0.0, bnb_max = 0.0, sdp_max = 0.0;
  for (int i = 0; i < num_instances; ++i) {
    const ObjectiveData data =
        gen.random_objective(maps, model, cfg.machine.T_fct(), cfg.controller.weights);

    auto t0 = std::chrono::steady_clock::now();
    (void)branch_and_bound(data, gen.random_sequence(cfg.controller.weights.N),
                           cfg.controller.bnb);
    const double tb = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    t0 = std::chrono::steady_clock::now();
    (void)solve(build_sdp(data), cfg.controller.sdp);
    const double ts = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bnb_total += tb;
    sdp_total += ts;
    bnb_max = std::max(bnb_max, tb);
    sdp_max = std::max(sdp_max, ts);
  }
  std::printf("instances        %d (N = %d)\n", num_instances, cfg.controller.weights.N);
  std::printf("bnb avg/max [ms] %.3f / %.3f\n", 1e3 * bnb_total / num_instances, 1e3 * bnb_max);
  std::printf("sdp avg/max [ms] %.3f / %.3f\n", 1e3 * sdp_total / num_instances, 1e3 * sdp_max);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct-torque finite-control-set MPC simulator"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* run = app.add_subcommand("run", "Run a closed-loop scenario and emit trace/metrics");
  run->add_option("--config", opts.config_path, "JSON config file");
  run->add_option("--mode", opts.mode, "bnb_only, sdp_only, or parallel");
  run->add_option("--seed", opts.seed, "RNG seed override");
  run->add_option("--out", opts.out_dir, "output directory");

  int oracle_N = 2, oracle_count = 100;
  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle-check",
                                    "Cross-check tree search and relaxation on random instances");
  oracle->add_option("--horizon", oracle_N, "horizon (1..4)");
  oracle->add_option("--instances", oracle_count, "number of random instances");
  oracle->add_option("--seed", oracle_seed, "RNG seed");

  std::string sweep_param;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Run one scenario per parameter value");
  sweep->add_option("--config", opts.config_path, "JSON config file");
  sweep->add_option("--mode", opts.mode, "controller mode override");
  sweep->add_option("--seed", opts.seed, "RNG seed override");
  sweep->add_option("--out", opts.out_dir, "output directory");
  sweep->add_option("parameter", sweep_param, "lambda_u or n_p_max")->required();
  sweep->add_option("values", sweep_values, "values to sweep");

  int bench_count = 50;
  auto* bench = app.add_subcommand("bench", "Per-step solver timing report");
  bench->add_option("--config", opts.config_path, "JSON config file");
  bench->add_option("--seed", opts.seed, "RNG seed override");
  bench->add_option("--instances", bench_count, "number of instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opts);
    if (oracle->parsed()) return cmd_oracle_check(oracle_N, oracle_count, oracle_seed);
    if (sweep->parsed()) return cmd_sweep(opts, sweep_param, sweep_values);
    if (bench->parsed()) return cmd_bench(opts, bench_count);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
