#include "dtmpc/controller.hpp"

#include <chrono>
#include <cmath>
#include <future>

namespace dtmpc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct BnbOutcome {
  BnbResult result;
  double wall_s = 0.0;
};

struct SdpOutcome {
  SwitchSequence U;
  double f = 0.0;
  SolveReport report;
  double wall_s = 0.0;
  bool failed = false;
};

BnbOutcome run_bnb(const ObjectiveData& data, const SwitchSequence& U_prev_opt,
                   const BnbConfig& cfg) {
  const auto t0 = Clock::now();
  const SwitchSequence guess = educated_guess(U_prev_opt);
  BnbOutcome out;
  out.result = branch_and_bound(data, guess, cfg);
  out.wall_s = seconds_since(t0);
  return out;
}

SdpOutcome run_sdp(const ObjectiveData& data, const ControllerConfig& cfg,
                   const std::optional<LiftedMatrix>& warm_start) {
  const auto t0 = Clock::now();
  SdpOutcome out;
  const SdpProblem problem = build_sdp(data);
  out.report = solve(problem, cfg.sdp, warm_start);
  if (!out.report.Theta.Theta.allFinite() || !std::isfinite(out.report.objective)) {
    out.failed = true;
    out.wall_s = seconds_since(t0);
    return out;
  }
  const double psd_tol =
      std::max(1e-3, 10.0 * std::max(out.report.primal_residual, out.report.dual_residual));
  try {
    out.U = extract(out.report.Theta, cfg.extraction, psd_tol);
    out.f = evaluate_cost(out.U, data);
  } catch (const std::invalid_argument&) {
    // a badly warm-started solve can leave the iterate outside the cone even
    // though the residuals look small; surrender this branch to the tree search
    out.failed = true;
  }
  if (!std::isfinite(out.f)) out.failed = true;
  out.wall_s = seconds_since(t0);
  return out;
}

}  // namespace

StepResult control_step(const StateVector& x_meas, const Eigen::Vector3d& u_prev,
                        const SwitchSequence& U_prev_opt, const References& refs,
                        const HorizonMaps& maps, const DiscreteModel& model, double T_fct,
                        const ControllerConfig& cfg,
                        const std::optional<LiftedMatrix>& sdp_warm_start) {
  const ObjectiveData data =
      build_objective_data(maps, model, T_fct, x_meas, u_prev, refs, cfg.weights);

  std::optional<BnbOutcome> bnb;
  std::optional<SdpOutcome> sdp;

  switch (cfg.mode) {
    case ControllerMode::BnbOnly:
      bnb = run_bnb(data, U_prev_opt, cfg.bnb);
      break;
    case ControllerMode::SdpOnly:
      sdp = run_sdp(data, cfg, sdp_warm_start);
      if (sdp->failed) bnb = run_bnb(data, U_prev_opt, cfg.bnb);
      break;
    case ControllerMode::Parallel: {
      auto sdp_future = std::async(std::launch::async, run_sdp, std::cref(data),
                                   std::cref(cfg), std::cref(sdp_warm_start));
      bnb = run_bnb(data, U_prev_opt, cfg.bnb);
      sdp = sdp_future.get();
      break;
    }
  }

  StepResult result;
  StepDiagnostics& d = result.diag;
  if (bnb) {
    d.f_bnb = bnb->result.f_inc;
    d.n_p = bnb->result.n_p;
    d.bnb_wall_s = bnb->wall_s;
  }
  if (sdp) {
    d.sdp_failed = sdp->failed;
    d.sdp_wall_s = sdp->wall_s;
    if (!sdp->failed) {
      d.f_sdp = sdp->f;
      d.sdp_iters = sdp->report.iters;
      d.sdp_lower_bound = sdp->report.objective;
      result.Theta_sdp = sdp->report.Theta;
    }
  }

  const bool sdp_usable = sdp && !sdp->failed;
  if (bnb && sdp_usable) {
    // Strict comparison: equal costs fall through to the relaxed branch.
    if (bnb->result.f_inc < sdp->f) {
      result.U_chosen = bnb->result.U_inc;
      d.f_chosen = bnb->result.f_inc;
      d.chosen_source = ChosenSource::Bnb;
    } else {
      result.U_chosen = sdp->U;
      d.f_chosen = sdp->f;
      d.chosen_source = ChosenSource::Sdp;
    }
  } else if (sdp_usable) {
    result.U_chosen = sdp->U;
    d.f_chosen = sdp->f;
    d.chosen_source = ChosenSource::Sdp;
  } else {
    result.U_chosen = bnb->result.U_inc;
    d.f_chosen = bnb->result.f_inc;
    d.chosen_source = ChosenSource::Bnb;
  }
  if (sdp_usable) d.gap = d.f_chosen - d.sdp_lower_bound;

  result.u_apply = result.U_chosen.head<3>().cast<double>();
  return result;
}

Controller::Controller(const MachineParams& params, const OperatingPoint& op,
                       double T_c_seconds, ControllerConfig cfg)
    : cfg_(std::move(cfg)),
      model_(build_discrete_model(params, op, T_c_seconds)),
      maps_(build_horizon_maps(model_, cfg_.weights.N)),
      T_fct_(params.T_fct()),
      U_prev_opt_(SwitchSequence::Zero(3 * cfg_.weights.N)) {}

StepResult Controller::step(const StateVector& x_meas, const Eigen::Vector3d& u_prev,
                            const References& refs) {
  StepResult result = control_step(x_meas, u_prev, U_prev_opt_, refs, maps_, model_, T_fct_,
                                   cfg_, Theta_prev_);
  // Reuse the previous lifted solution to seed the next relaxation solve.
  Theta_prev_ = result.Theta_sdp;
  receding_horizon_shift(result.U_chosen);
  return result;
}

void Controller::receding_horizon_shift(const SwitchSequence& U_chosen) {
  U_prev_opt_ = U_chosen;
}

}  // namespace dtmpc
