#include <doctest.h>

#include "dtmpc/controller.hpp"
#include "dtmpc/instance_gen.hpp"
#include "dtmpc/sim_harness.hpp"

using namespace dtmpc;

namespace {

struct Fixture {
  MachineParams params;
  OperatingPoint op{0.9933};
  DiscreteModel model;
  HorizonMaps maps;
  ControllerConfig cfg;

  explicit Fixture(int N = 2)
      : model(build_discrete_model(params, op, 25e-6)), maps(build_horizon_maps(model, N)) {
    cfg.weights.N = N;
    cfg.sdp.max_iters = 600;
  }
};

}  // namespace

TEST_CASE("control step") {
  Fixture fx;
  InstanceGenerator gen(71);

  SUBCASE("applies the first triple of the chosen sequence") {
    for (int i = 0; i < 10; ++i) {
      const StateVector x = gen.random_state();
      const Eigen::Vector3d u_prev = gen.random_ternary_triple();
      const SwitchSequence U_prev = gen.random_sequence(2);
      const References refs = gen.random_references();
      const StepResult r = control_step(x, u_prev, U_prev, refs, fx.maps, fx.model,
                                        fx.params.T_fct(), fx.cfg);
      CHECK(r.U_chosen.size() == 6);
      CHECK(is_ternary(r.U_chosen));
      CHECK((r.u_apply - r.U_chosen.head<3>().cast<double>()).norm() == 0.0);
    }
  }

  SUBCASE("parallel mode picks the cheaper certificate") {
    int bnb_wins = 0;
    for (int i = 0; i < 20; ++i) {
      const StateVector x = gen.random_state();
      const Eigen::Vector3d u_prev = gen.random_ternary_triple();
      const SwitchSequence U_prev = gen.random_sequence(2);
      const References refs = gen.random_references();
      const StepResult r = control_step(x, u_prev, U_prev, refs, fx.maps, fx.model,
                                        fx.params.T_fct(), fx.cfg);
      CHECK(r.diag.f_chosen == std::min(r.diag.f_bnb, r.diag.f_sdp));
      if (r.diag.chosen_source == ChosenSource::Bnb) {
        CHECK(r.diag.f_bnb < r.diag.f_sdp);  // ties go to the relaxation
        ++bnb_wins;
      } else {
        CHECK(r.diag.f_sdp <= r.diag.f_bnb);
      }
    }
    // with an unlimited node budget the tree search should win regularly
    CHECK(bnb_wins > 0);
  }

  SUBCASE("unlimited tree search is never beaten strictly") {
    for (int i = 0; i < 10; ++i) {
      const StateVector x = gen.random_state();
      const Eigen::Vector3d u_prev = gen.random_ternary_triple();
      const SwitchSequence U_prev = gen.random_sequence(2);
      const References refs = gen.random_references();
      const StepResult r = control_step(x, u_prev, U_prev, refs, fx.maps, fx.model,
                                        fx.params.T_fct(), fx.cfg);
      CHECK(r.diag.f_bnb <= r.diag.f_sdp + 1e-9);
    }
  }

  SUBCASE("lower bound sandwiches the chosen cost") {
    const StateVector x = gen.random_state();
    const Eigen::Vector3d u_prev = gen.random_ternary_triple();
    const SwitchSequence U_prev = gen.random_sequence(2);
    const References refs = gen.random_references();
    const StepResult r =
        control_step(x, u_prev, U_prev, refs, fx.maps, fx.model, fx.params.T_fct(), fx.cfg);
    CHECK(r.diag.sdp_lower_bound <= r.diag.f_chosen + 1e-3);
    CHECK(r.diag.gap == doctest::Approx(r.diag.f_chosen - r.diag.sdp_lower_bound));
  }

  SUBCASE("modes agree with their dedicated branches") {
    const StateVector x = gen.random_state();
    const Eigen::Vector3d u_prev = gen.random_ternary_triple();
    const SwitchSequence U_prev = gen.random_sequence(2);
    const References refs = gen.random_references();

    ControllerConfig bnb_cfg = fx.cfg;
    bnb_cfg.mode = ControllerMode::BnbOnly;
    const StepResult rb = control_step(x, u_prev, U_prev, refs, fx.maps, fx.model,
                                       fx.params.T_fct(), bnb_cfg);
    CHECK(rb.diag.chosen_source == ChosenSource::Bnb);
    CHECK_FALSE(rb.Theta_sdp.has_value());

    ControllerConfig sdp_cfg = fx.cfg;
    sdp_cfg.mode = ControllerMode::SdpOnly;
    const StepResult rs = control_step(x, u_prev, U_prev, refs, fx.maps, fx.model,
                                       fx.params.T_fct(), sdp_cfg);
    CHECK(rs.diag.chosen_source == ChosenSource::Sdp);
    CHECK(rs.Theta_sdp.has_value());
    CHECK(rs.diag.n_p == 0);

    const StepResult rp = control_step(x, u_prev, U_prev, refs, fx.maps, fx.model,
                                       fx.params.T_fct(), fx.cfg);
    CHECK(rp.diag.f_bnb == doctest::Approx(rb.diag.f_bnb));
    CHECK(rp.diag.f_sdp == doctest::Approx(rs.diag.f_sdp));
  }

  SUBCASE("deterministic across repeated calls") {
    const StateVector x = gen.random_state();
    const Eigen::Vector3d u_prev = gen.random_ternary_triple();
    const SwitchSequence U_prev = gen.random_sequence(2);
    const References refs = gen.random_references();
    const StepResult a =
        control_step(x, u_prev, U_prev, refs, fx.maps, fx.model, fx.params.T_fct(), fx.cfg);
    const StepResult b =
        control_step(x, u_prev, U_prev, refs, fx.maps, fx.model, fx.params.T_fct(), fx.cfg);
    CHECK(a.U_chosen == b.U_chosen);
    CHECK(a.diag.f_chosen == b.diag.f_chosen);
    CHECK(a.diag.n_p == b.diag.n_p);
  }
}

TEST_CASE("stateful controller") {
  Fixture fx(5);  // N=2 is too myopic to hold the operating point
  InstanceGenerator gen(72);
  Controller ctrl(fx.params, fx.op, 25e-6, fx.cfg);

  SUBCASE("cold start uses the all-zero previous sequence") {
    CHECK(ctrl.previous_sequence() == SwitchSequence::Zero(6));
  }

  SUBCASE("receding-horizon shift feeds the next educated guess") {
    const References refs{0.2, 1.0};
    StateVector x = steady_state_init(0.2, 1.0, fx.op.omega_r, fx.params);
    Eigen::Vector3d u_prev = Eigen::Vector3d::Zero();
    for (int i = 0; i < 5; ++i) {
      const StepResult r = ctrl.step(x, u_prev, refs);
      ctrl.receding_horizon_shift(r.U_chosen);
      CHECK(ctrl.previous_sequence() == r.U_chosen);
      x = ctrl.model().A * x + ctrl.model().B * r.u_apply;
      u_prev = r.u_apply;
    }
    // at the steady operating point the tracking error should stay small
    CHECK(std::abs(torque(x, fx.params) - refs.T_e_star) < 0.1);
  }
}
