// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses fixed seeds so the
// verdicts are reproducible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dtmpc/bnb_solver.hpp"
#include "dtmpc/config_io.hpp"
#include "dtmpc/conic_solver.hpp"
#include "dtmpc/controller.hpp"
#include "dtmpc/instance_gen.hpp"
#include "dtmpc/sim_harness.hpp"

using namespace dtmpc;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct Setup {
  MachineParams params;
  OperatingPoint op{0.9933};
  DiscreteModel model;
  Setup() : model(build_discrete_model(params, op, 25e-6)) {}

  ObjectiveData instance(InstanceGenerator& gen, int N) const {
    ControllerWeights w;
    w.N = N;
    return gen.random_objective(build_horizon_maps(model, N), model, params.T_fct(), w);
  }
};

// Desk-scale version of the published step scenario: 5 ms of steady-state
// warm-up, reference step at 0.705 s, 25 ms of post-step window.
ScenarioConfig step_scenario() {
  ScenarioConfig s;
  s.t_start = 0.700;
  s.t_end = 0.730;
  s.torque_ref_schedule = {{0.0, 0.2}, {0.705, 1.0}};
  s.rng_seed = 1;
  return s;
}

ControllerConfig preset_controller(ControllerMode mode) {
  ControllerConfig c = default_run_config().controller;
  c.mode = mode;
  return c;
}

ObjectiveData step_objective(const Setup& fx, const SimStep& step, int N) {
  const HorizonMaps maps = build_horizon_maps(fx.model, N);
  ControllerWeights w;
  w.N = N;
  return build_objective_data(maps, fx.model, fx.params.T_fct(), step.x_meas, step.u_prev,
                              References{step.T_ref, step.Psi_ref}, w);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- criterion 1: B&B with unlimited nodes matches exhaustive enumeration ---
void criterion_1(const Setup& fx) {
  InstanceGenerator gen(1001);
  int checked = 0, matched = 0;
  double worst = 0.0;
  auto run = [&](int N, int count) {
    for (int i = 0; i < count; ++i) {
      const ObjectiveData data = fx.instance(gen, N);
      const auto [U_opt, f_opt] = exhaustive_search(data);
      const BnbResult r = branch_and_bound(data, gen.random_sequence(N), BnbConfig{});
      const double rel = std::abs(r.f_inc - f_opt) / std::max(1.0, std::abs(f_opt));
      worst = std::max(worst, rel);
      ++checked;
      if (r.completed && rel <= 1e-9) ++matched;
    }
  };
  run(2, 100);
  run(3, 20);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d instances, worst rel err %.2e", matched, checked, worst);
  report(1, "tree search matches exhaustive enumeration", matched == checked, buf);
}

// --- criterion 2: lifted cost of an exact lifting equals the direct cost ---
void criterion_2(const Setup& fx) {
  InstanceGenerator gen(1002);
  int checked = 0, matched = 0;
  double worst = 0.0;
  for (int N : {1, 2, 5}) {
    const HorizonMaps maps = build_horizon_maps(fx.model, N);
    ControllerWeights w;
    w.N = N;
    for (int i = 0; i < 1000; ++i) {
      const ObjectiveData data =
          build_objective_data(maps, fx.model, fx.params.T_fct(), gen.random_state(),
                               gen.random_ternary_triple(), gen.random_references(), w);
      const SwitchSequence U = gen.random_sequence(N);
      const double f = evaluate_cost(U, data);
      const double f_lift = evaluate_lifted_cost(lift(U).Theta, data);
      const double err = std::abs(f_lift - f) / std::max(1.0, std::abs(f));
      worst = std::max(worst, err);
      ++checked;
      if (err <= 1e-9) ++matched;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d pairs, worst rel err %.2e", matched, checked, worst);
  report(2, "lifting identity", matched == checked, buf);
}

// --- criterion 3: relaxation lower bound / extraction upper bound sandwich ---
void criterion_3(const Setup& fx) {
  InstanceGenerator gen(1003);
  SolverConfig cfg;
  cfg.max_iters = 5000;
  int ok = 0;
  double worst_lower = 0.0, worst_upper = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ObjectiveData data = fx.instance(gen, 2);
    const auto [U_opt, f_opt] = exhaustive_search(data);
    const SolveReport r = solve(build_sdp(data), cfg);
    const SwitchSequence U = extract(r.Theta, ExtractionMethod::FirstColumn, 1e-2);
    const double f_up = evaluate_cost(U, data);
    const bool lower_ok = r.objective <= f_opt + 1e-3;
    const bool upper_ok = f_up >= r.objective - 1e-3;
    worst_lower = std::max(worst_lower, r.objective - f_opt);
    worst_upper = std::max(worst_upper, r.objective - f_up);
    if (lower_ok && upper_ok) ++ok;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/20 instances, max bound violations %.2e / %.2e", ok,
                worst_lower, worst_upper);
  report(3, "relaxation sandwich", ok == 20, buf);
}

// --- criterion 4: batch prediction maps equal iterated dynamics ---
void criterion_4(const Setup& fx) {
  InstanceGenerator gen(1004);
  const int N = 5;
  const HorizonMaps maps = build_horizon_maps(fx.model, N);
  int checked = 0, matched = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const StateVector x0 = gen.random_state();
    const SwitchSequence U = gen.random_sequence(N);
    const Eigen::VectorXd Ud = U.cast<double>();
    StateVector x = x0;
    bool all_ok = true;
    for (int l = 0; l < N; ++l) {
      x = fx.model.A * x + fx.model.B * Ud.segment<3>(3 * l);
      const Eigen::Vector2d ps = maps.Gamma_s[l] * x0 + maps.Upsilon_s[l] * Ud;
      const Eigen::Vector2d pr = maps.Gamma_r[l] * x0 + maps.Upsilon_r[l] * Ud;
      const double err = std::max((ps - x.head<2>()).norm(), (pr - x.tail<2>()).norm());
      worst = std::max(worst, err);
      if (err > 1e-10) all_ok = false;
    }
    ++checked;
    if (all_ok) ++matched;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d cases, worst abs err %.2e", matched, checked, worst);
  report(4, "prediction matrices match iterated dynamics", matched == checked, buf);
}

// --- criterion 5: node-count phenomenology --------------------------------
void criterion_5(const Setup& fx) {
  // (a) steady-state run with an unlimited budget: actual expansion counts.
  ScenarioConfig steady = step_scenario();
  steady.t_end = 0.705;
  steady.torque_ref_schedule = {{0.0, 0.2}};
  ControllerConfig unlim = preset_controller(ControllerMode::BnbOnly);
  unlim.bnb.n_p_max = BnbConfig::unlimited;
  const auto [trace_a, metrics_a] = run_scenario(steady, unlim, fx.params);

  std::uint64_t max_np = 0, within = 0;
  for (const SimStep& s : trace_a.steps) {
    max_np = std::max(max_np, s.diag.n_p);
    if (s.diag.n_p <= 500) ++within;
  }
  const double frac = double(within) / double(trace_a.steps.size());

  // (b) re-solve the first torque-step instance with no node limit.
  const auto [trace_b, metrics_b] = run_scenario(step_scenario(),
                                                 preset_controller(ControllerMode::Parallel),
                                                 fx.params);
  const SimStep* step_instance = nullptr;
  for (const SimStep& s : trace_b.steps) {
    if (s.T_ref > 0.5) {
      step_instance = &s;
      break;
    }
  }
  bool ratio_ok = false;
  std::uint64_t np_step = 0;
  if (step_instance != nullptr) {
    const ObjectiveData data = step_objective(fx, *step_instance, 5);
    const BnbResult r =
        branch_and_bound(data, educated_guess(step_instance->U_guess_base), BnbConfig{});
    np_step = r.n_p;
    ratio_ok = r.completed && np_step >= 10 * std::max<std::uint64_t>(1, max_np);
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "steady <=500 for %.1f%% of steps (max %llu); step instance %llu nodes",
                100.0 * frac, (unsigned long long)max_np, (unsigned long long)np_step);
  report(5, "node-count phenomenology", frac >= 0.95 && ratio_ok, buf);
}

// --- criterion 6: transient rescue ----------------------------------------
void criterion_6(const Setup& fx) {
  const ScenarioConfig scen = step_scenario();
  const double t_step = 0.705;
  // This criterion uses the low end of the switching-penalty sweep. At the
  // shipped lambda_u = 3.8e-3 the controller's cost balance tolerates a steady
  // torque ripple of about sqrt(lambda_u / (lambda_T N)) ~ 0.12, so no solver
  // can hold the 1.0 +/- 0.1 band. The node-limited arm runs the literal
  // fixed-enumeration traversal; best-first sibling ordering hides the
  // incumbent starvation this criterion is about.
  auto arm = [](ControllerMode mode) {
    ControllerConfig c = preset_controller(mode);
    c.weights.lambda_u = 1e-3;
    c.bnb.child_order = ChildOrder::FixedEnumeration;
    return c;
  };
  const auto [trace_p, m_p] = run_scenario(scen, arm(ControllerMode::Parallel), fx.params);
  const auto [trace_b, m_b] = run_scenario(scen, arm(ControllerMode::BnbOnly), fx.params);

  const double err_p = mean_abs_torque_error(trace_p, t_step, t_step + 15e-3);
  const double err_b = mean_abs_torque_error(trace_b, t_step, t_step + 15e-3);

  bool in_band = true;
  for (const SimStep& s : trace_p.steps) {
    if (s.t >= t_step + 10e-3 && std::abs(s.T_e - 1.0) > 0.1) in_band = false;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "post-step mean |e_T|: parallel %.4f vs capped tree %.4f; band hold %s", err_p,
                err_b, in_band ? "yes" : "no");
  report(6, "transient rescue", err_p <= 0.5 * err_b && in_band, buf);
}

// --- criterion 7: switching-weight monotonicity ----------------------------
void criterion_7(const Setup& fx) {
  ScenarioConfig scen;
  scen.t_start = 0.0;
  scen.t_end = 0.2;
  scen.torque_ref_schedule = {{0.0, 0.2}};
  scen.rng_seed = 1;
  std::vector<double> fsw;
  for (double lambda_u : {1e-3, 3.8e-3, 1.3e-2}) {
    ControllerConfig ctrl = preset_controller(ControllerMode::BnbOnly);
    ctrl.weights.lambda_u = lambda_u;
    const auto [trace, metrics] = run_scenario(scen, ctrl, fx.params);
    fsw.push_back(metrics.f_sw_hz);
  }
  const bool mono = fsw[1] <= fsw[0] * 1.05 && fsw[2] <= fsw[1] * 1.05;
  char buf[96];
  std::snprintf(buf, sizeof buf, "f_sw = %.1f / %.1f / %.1f Hz", fsw[0], fsw[1], fsw[2]);
  report(7, "switching frequency non-increasing in lambda_u", mono, buf);
}

// --- criterion 8: solver feasibility at the control-loop setting -----------
void criterion_8(const Setup& fx) {
  const auto [trace, metrics] = run_scenario(step_scenario(),
                                             preset_controller(ControllerMode::Parallel),
                                             fx.params);
  SolverConfig cfg;  // shipped 120-iteration cap
  int ok = 0, total = 0;
  double worst_res = 0.0, wall_total = 0.0;
  const size_t stride = std::max<size_t>(1, trace.steps.size() / 50);
  for (size_t i = 0; i < trace.steps.size() && total < 50; i += stride) {
    const ObjectiveData data = step_objective(fx, trace.steps[i], 5);
    const auto t0 = std::chrono::steady_clock::now();
    const SolveReport r = solve(build_sdp(data), cfg);
    wall_total += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double res = std::max(r.primal_residual, r.dual_residual);
    worst_res = std::max(worst_res, res);
    bool valid = res <= 1e-2;
    const SwitchSequence U =
        extract(r.Theta, ExtractionMethod::FirstColumn, std::max(1e-3, 10.0 * res));
    valid = valid && is_ternary(U) && std::isfinite(evaluate_cost(U, data));
    ++total;
    if (valid) ++ok;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d/%d instances, worst residual %.2e, avg wall %.2f ms", ok,
                total, worst_res, 1e3 * wall_total / std::max(1, total));
  report(8, "120-iteration solves stay feasible at N = 5", ok == total && total == 50, buf);
}

// --- criterion 9: byte-identical traces for identical config and seed ------
void criterion_9(const Setup& fx) {
  const ScenarioConfig scen = step_scenario();
  const ControllerConfig ctrl = preset_controller(ControllerMode::Parallel);
  const auto [trace_a, m_a] = run_scenario(scen, ctrl, fx.params);
  const auto [trace_b, m_b] = run_scenario(scen, ctrl, fx.params);
  const std::string pa = "acceptance_trace_a.csv";
  const std::string pb = "acceptance_trace_b.csv";
  write_trace_csv(trace_a, pa);
  write_trace_csv(trace_b, pb);
  const std::string a = slurp(pa);
  const std::string b = slurp(pb);
  const bool same = !a.empty() && a == b;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu bytes each, %s", a.size(),
                same ? "identical" : "diverged");
  report(9, "deterministic traces", same, buf);
  std::remove(pa.c_str());
  std::remove(pb.c_str());
}

}  // namespace

int main() {
  const Setup fx;
  criterion_1(fx);
  criterion_2(fx);
  criterion_3(fx);
  criterion_4(fx);
  criterion_5(fx);
  criterion_6(fx);
  criterion_7(fx);
  criterion_8(fx);
  criterion_9(fx);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
