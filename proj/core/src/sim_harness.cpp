#include "dtmpc/sim_harness.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace dtmpc {

void ScenarioConfig::validate() const {
  if (T_c <= 0.0 || T_s <= 0.0) throw std::invalid_argument("sampling intervals must be positive");
  const double ratio = T_c / T_s;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw std::invalid_argument("T_c must be an integer multiple of T_s");
  if (t_end <= t_start) throw std::invalid_argument("t_end must exceed t_start");
  if (torque_ref_schedule.empty()) throw std::invalid_argument("torque reference schedule is empty");
  for (std::size_t i = 1; i < torque_ref_schedule.size(); ++i) {
    if (torque_ref_schedule[i].first < torque_ref_schedule[i - 1].first)
      throw std::invalid_argument("torque reference schedule times must be nondecreasing");
  }
  if (Psi_s_star <= 0.0) throw std::invalid_argument("flux reference must be positive");
  if (noise_amplitude < 0.0) throw std::invalid_argument("noise amplitude must be nonnegative");
}

double ScenarioConfig::torque_ref_at(double t) const {
  double value = torque_ref_schedule.front().second;
  for (const auto& [time, ref] : torque_ref_schedule) {
    if (time <= t) value = ref;
    else break;
  }
  return value;
}

StateVector steady_state_init(double T_e_star, double Psi_s_star, double omega_r,
                              const MachineParams& params) {
  params.validate();
  (void)omega_r;  // the synchronous solution depends on the slip only
  const double b = params.X_s() / params.X_m;
  const double a = params.D() / (params.R_r * params.X_m);
  const double Tf = params.T_fct();
  const double P2 = Psi_s_star * Psi_s_star;

  // Rotating-frame balance: psi_r = r [1, 0], psi_s = r [b, a*w_slip], with
  //   T_e = T_fct r^2 a w_slip  and  |psi_s|^2 = r^2 (b^2 + a^2 w_slip^2).
  // Eliminating r^2 gives a quadratic in the slip frequency.
  double w_slip = 0.0;
  if (T_e_star != 0.0) {
    const double disc = Tf * P2 * Tf * P2 - 4.0 * b * b * T_e_star * T_e_star;
    if (disc < 0.0)
      throw std::domain_error("requested torque exceeds the pull-out limit");
    w_slip = (Tf * P2 - std::sqrt(disc)) / (2.0 * a * T_e_star);
  }
  const double r = Psi_s_star / std::sqrt(b * b + a * a * w_slip * w_slip);

  StateVector x;
  x << r * b, r * a * w_slip, r, 0.0;
  return x;
}

double switching_frequency(const SimTrace& trace, double T_c) {
  if (trace.steps.size() < 2) return 0.0;
  double transitions = 0.0;
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    transitions += (trace.steps[k].u - trace.steps[k - 1].u).lpNorm<1>();
  }
  const double duration = static_cast<double>(trace.steps.size()) * T_c;
  return transitions / (12.0 * duration);
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

std::pair<SimTrace, Metrics> run_scenario(const ScenarioConfig& cfg,
                                          const ControllerConfig& controller_cfg,
                                          const MachineParams& params) {
  cfg.validate();
  params.validate();

  const OperatingPoint op{cfg.omega_r};
  const DiscreteModel plant = build_discrete_model(params, op, cfg.T_s);
  Controller controller(params, op, cfg.T_c, controller_cfg);

  const int n_sub = static_cast<int>(std::round(cfg.T_c / cfg.T_s));
  const int n_steps = static_cast<int>(std::round((cfg.t_end - cfg.t_start) / cfg.T_c));

  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  StateVector x = steady_state_init(cfg.torque_ref_at(cfg.t_start), cfg.Psi_s_star,
                                    cfg.omega_r, params);
  Eigen::Vector3d u_prev = Eigen::Vector3d::Zero();

  SimTrace trace;
  trace.steps.reserve(n_steps);
  if (cfg.emit_plant_trace) trace.plant_states.reserve(n_steps);

  for (int k = 0; k < n_steps; ++k) {
    const double t = cfg.t_start + k * cfg.T_c;
    const References refs{cfg.torque_ref_at(t), cfg.Psi_s_star};

    StateVector x_meas = x;
    for (int i = 0; i < 4; ++i) x_meas(i) += cfg.noise_amplitude * unit(rng);

    SimStep step;
    step.t = t;
    step.T_ref = refs.T_e_star;
    step.Psi_ref = refs.Psi_s_star;
    step.x_meas = x_meas;
    step.u_prev = u_prev;
    step.U_guess_base = controller.previous_sequence();

    const StepResult res = controller.step(x_meas, u_prev, refs);
    step.u = res.u_apply;
    step.diag = res.diag;

    step.T_e = torque(x, params);
    step.Psi_s = std::sqrt(flux_mag_sq(x));
    step.i_s_abc = inverse_clarke(stator_current(x, params));

    for (int i = 0; i < n_sub; ++i) x = plant_step(plant, x, res.u_apply);
    if (!x.allFinite() || x.norm() > cfg.state_sanity_limit) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "state sanity limit breached at t = %.6f s (|x| = %.3f, limit %.3f)", t,
                    x.norm(), cfg.state_sanity_limit);
      throw std::runtime_error(msg);
    }

    u_prev = res.u_apply;
    trace.steps.push_back(std::move(step));
    if (cfg.emit_plant_trace) trace.plant_states.push_back(x);
  }

  return {trace, compute_metrics(trace, cfg)};
}

Metrics compute_metrics(const SimTrace& trace, const ScenarioConfig& cfg) {
  Metrics m;
  if (trace.steps.empty()) return m;
  m.f_sw_hz = switching_frequency(trace, cfg.T_c);

  std::vector<double> walls, nodes;
  walls.reserve(trace.steps.size());
  nodes.reserve(trace.steps.size());
  double sum_eT = 0.0, sum_ePsi = 0.0;
  bool step_seen = false;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const SimStep& s = trace.steps[k];
    const double eT = std::abs(s.T_ref - s.T_e);
    const double ePsi = std::abs(s.Psi_ref - s.Psi_s);
    sum_eT += eT;
    sum_ePsi += ePsi;
    m.max_abs_torque_err = std::max(m.max_abs_torque_err, eT);
    m.max_abs_flux_err = std::max(m.max_abs_flux_err, ePsi);
    walls.push_back(s.diag.bnb_wall_s);
    nodes.push_back(static_cast<double>(s.diag.n_p));

    const bool ref_changed = k > 0 && s.T_ref != trace.steps[k - 1].T_ref;
    if (ref_changed && !step_seen) {
      m.np_at_step = s.diag.n_p;
      step_seen = true;
    }
    if (!step_seen) m.max_np_steady = std::max(m.max_np_steady, s.diag.n_p);

    if (k > 0) {
      const Eigen::Vector3d du = s.u - trace.steps[k - 1].u;
      for (int z = 0; z < 3; ++z)
        if (std::abs(du(z)) >= 2.0) ++m.multilevel_jumps;
    }
  }
  m.mean_abs_torque_err = sum_eT / static_cast<double>(trace.steps.size());
  m.mean_abs_flux_err = sum_ePsi / static_cast<double>(trace.steps.size());
  m.corr_time_np = pearson_correlation(walls, nodes);
  return m;
}

double mean_abs_torque_error(const SimTrace& trace, double t0, double t1) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const SimStep& s : trace.steps) {
    if (s.t >= t0 && s.t <= t1) {
      sum += std::abs(s.T_ref - s.T_e);
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

void write_trace_csv(const SimTrace& trace, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw std::runtime_error("cannot open trace file: " + path);
  std::fputs(
      "t,u_a,u_b,u_c,T_e,T_ref,psi_s,psi_ref,i_sa,i_sb,i_sc,n_p,sdp_iters,chosen_source,"
      "f_bnb,f_sdp,f_lower\n",
      f);
  for (const SimStep& s : trace.steps) {
    std::fprintf(f,
                 "%.9f,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%llu,%d,%s,"
                 "%.17g,%.17g,%.17g\n",
                 s.t, static_cast<int>(s.u(0)), static_cast<int>(s.u(1)),
                 static_cast<int>(s.u(2)), s.T_e, s.T_ref, s.Psi_s, s.Psi_ref, s.i_s_abc(0),
                 s.i_s_abc(1), s.i_s_abc(2), static_cast<unsigned long long>(s.diag.n_p),
                 s.diag.sdp_iters, s.diag.chosen_source == ChosenSource::Bnb ? "bnb" : "sdp",
                 s.diag.f_bnb, s.diag.f_sdp, s.diag.sdp_lower_bound);
  }
  std::fclose(f);
}

}  // namespace dtmpc
