#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dtmpc/controller.hpp"

namespace dtmpc {

struct ScenarioConfig {
  double T_c = 25e-6;    // controller sampling interval [s]
  double T_s = 0.5e-6;   // plant sampling interval [s]
  double t_start = 0.700;
  double t_end = 0.730;
  /// Torque reference as (time, value) steps; the entry active at time t is
  /// the last one with time <= t.
  std::vector<std::pair<double, double>> torque_ref_schedule = {{0.0, 0.2}, {0.705, 1.0}};
  double Psi_s_star = 1.0;
  double noise_amplitude = 2.5e-3;  // uniform, per measured state component [pu]
  std::uint64_t rng_seed = 1;
  double omega_r = 0.9933;
  double state_sanity_limit = 3.0;  // abort when the state norm exceeds this [pu]
  bool emit_plant_trace = false;    // keep the downsampled plant-state history

  void validate() const;
  double torque_ref_at(double t) const;
};

struct SimStep {
  double t = 0.0;
  Eigen::Vector3d u;
  double T_e = 0.0;
  double T_ref = 0.0;
  double Psi_s = 0.0;
  double Psi_ref = 0.0;
  Eigen::Vector3d i_s_abc;
  StepDiagnostics diag;
  // controller inputs, kept so individual instances can be re-solved offline
  StateVector x_meas;
  Eigen::Vector3d u_prev;
  SwitchSequence U_guess_base;  // previous chosen sequence (educated-guess source)
};

struct SimTrace {
  std::vector<SimStep> steps;
  std::vector<StateVector> plant_states;  // optional, one per control step
};

struct Metrics {
  double f_sw_hz = 0.0;
  double mean_abs_torque_err = 0.0;
  double max_abs_torque_err = 0.0;
  double mean_abs_flux_err = 0.0;
  double max_abs_flux_err = 0.0;
  std::uint64_t max_np_steady = 0;
  std::uint64_t np_at_step = 0;
  double corr_time_np = 0.0;
  std::uint64_t multilevel_jumps = 0;  // |du_z| = 2 transitions (audited, not forbidden)
};

/// Synchronous steady-state flux pair matching the requested torque and
/// stator flux magnitude; throws when the torque exceeds pull-out.
StateVector steady_state_init(double T_e_star, double Psi_s_star, double omega_r,
                              const MachineParams& params);

/// Average device turn-on rate: unit-level phase transitions summed over the
/// trace, spread over the 12 devices of the three-level inverter.
double switching_frequency(const SimTrace& trace, double T_c);

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

std::pair<SimTrace, Metrics> run_scenario(const ScenarioConfig& cfg,
                                          const ControllerConfig& controller_cfg,
                                          const MachineParams& params);

Metrics compute_metrics(const SimTrace& trace, const ScenarioConfig& cfg);

/// Mean absolute torque tracking error over [t0, t1].
double mean_abs_torque_error(const SimTrace& trace, double t0, double t1);

void write_trace_csv(const SimTrace& trace, const std::string& path);

}  // namespace dtmpc
