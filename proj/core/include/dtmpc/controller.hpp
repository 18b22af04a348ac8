#pragma once

#include <optional>

#include "dtmpc/bnb_solver.hpp"
#include "dtmpc/conic_solver.hpp"
#include "dtmpc/sdp_relaxation.hpp"

namespace dtmpc {

enum class ControllerMode { BnbOnly, SdpOnly, Parallel };
enum class ChosenSource { Bnb, Sdp };

struct ControllerConfig {
  ControllerWeights weights;
  BnbConfig bnb;
  SolverConfig sdp;
  ExtractionMethod extraction = ExtractionMethod::FirstColumn;
  ControllerMode mode = ControllerMode::Parallel;
};

struct StepDiagnostics {
  double f_bnb = 0.0;
  double f_sdp = 0.0;
  double f_chosen = 0.0;
  ChosenSource chosen_source = ChosenSource::Bnb;
  std::uint64_t n_p = 0;
  int sdp_iters = 0;
  double sdp_lower_bound = 0.0;
  double gap = 0.0;
  double bnb_wall_s = 0.0;
  double sdp_wall_s = 0.0;
  bool sdp_failed = false;  // non-finite SDP result; step degraded to B&B only
};

struct StepResult {
  Eigen::Vector3d u_apply;
  SwitchSequence U_chosen;
  StepDiagnostics diag;
  std::optional<LiftedMatrix> Theta_sdp;  // present when the relaxation ran and was finite
};

/// One receding-horizon step: builds the objective data from the measured
/// state, runs the node-limited tree search and the relaxation-plus-extraction
/// concurrently, and applies the first triple of the cheaper sequence. Ties go
/// to the relaxation branch (the comparison is strict).
StepResult control_step(const StateVector& x_meas, const Eigen::Vector3d& u_prev,
                        const SwitchSequence& U_prev_opt, const References& refs,
                        const HorizonMaps& maps, const DiscreteModel& model, double T_fct,
                        const ControllerConfig& cfg,
                        const std::optional<LiftedMatrix>& sdp_warm_start = std::nullopt);

/// Stateful wrapper: keeps the previous optimal sequence for the warm start
/// and the previous lifted solution for seeding the relaxation solver.
class Controller {
 public:
  Controller(const MachineParams& params, const OperatingPoint& op, double T_c_seconds,
             ControllerConfig cfg);

  StepResult step(const StateVector& x_meas, const Eigen::Vector3d& u_prev,
                  const References& refs);

  /// Stores the chosen sequence for the next step's educated guess.
  void receding_horizon_shift(const SwitchSequence& U_chosen);

  const SwitchSequence& previous_sequence() const { return U_prev_opt_; }
  const DiscreteModel& model() const { return model_; }
  const HorizonMaps& maps() const { return maps_; }
  double T_fct() const { return T_fct_; }
  const ControllerConfig& config() const { return cfg_; }

 private:
  ControllerConfig cfg_;
  DiscreteModel model_;
  HorizonMaps maps_;
  double T_fct_;
  SwitchSequence U_prev_opt_;  // all zeros at cold start
  std::optional<LiftedMatrix> Theta_prev_;
};

}  // namespace dtmpc
