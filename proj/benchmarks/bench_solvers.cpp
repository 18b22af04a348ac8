// Per-step solver microbenchmarks at the shipped operating point.

#include <benchmark/benchmark.h>

#include "dtmpc/bnb_solver.hpp"
#include "dtmpc/conic_solver.hpp"
#include "dtmpc/controller.hpp"
#include "dtmpc/instance_gen.hpp"

namespace {

using namespace dtmpc;

struct Setup {
  MachineParams params;
  DiscreteModel model;
  HorizonMaps maps;
  ObjectiveData data;

  explicit Setup(int N)
      : model(build_discrete_model(params, OperatingPoint{0.9933}, 25e-6)),
        maps(build_horizon_maps(model, N)) {
    InstanceGenerator gen(42);
    ControllerWeights w;
    w.N = N;
    data = gen.random_objective(maps, model, params.T_fct(), w);
  }
};

void BM_BuildObjective(benchmark::State& state) {
  const Setup fx(int(state.range(0)));
  InstanceGenerator gen(7);
  const StateVector x = gen.random_state();
  const Eigen::Vector3d u_prev = gen.random_ternary_triple();
  const References refs = gen.random_references();
  ControllerWeights w;
  w.N = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_objective_data(fx.maps, fx.model, fx.params.T_fct(), x, u_prev, refs, w));
  }
}
BENCHMARK(BM_BuildObjective)->Arg(2)->Arg(5);

void BM_BranchAndBound(benchmark::State& state) {
  const Setup fx(5);
  BnbConfig cfg;
  cfg.n_p_max = std::uint64_t(state.range(0));
  const SwitchSequence U0 = SwitchSequence::Zero(15);
  for (auto _ : state) {
    benchmark::DoNotOptimize(branch_and_bound(fx.data, U0, cfg));
  }
}
BENCHMARK(BM_BranchAndBound)->Arg(100)->Arg(500)->Arg(5000);

void BM_SdpSolve(benchmark::State& state) {
  const Setup fx(5);
  const SdpProblem problem = build_sdp(fx.data);
  SolverConfig cfg;
  cfg.max_iters = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(problem, cfg));
  }
}
BENCHMARK(BM_SdpSolve)->Arg(60)->Arg(120)->Arg(240);

void BM_ControlStep(benchmark::State& state) {
  const Setup fx(5);
  ControllerConfig cfg;
  cfg.mode = ControllerMode::Parallel;
  InstanceGenerator gen(9);
  const StateVector x = gen.random_state();
  const Eigen::Vector3d u_prev = gen.random_ternary_triple();
  const SwitchSequence U_prev = gen.random_sequence(5);
  const References refs = gen.random_references();
  for (auto _ : state) {
    benchmark::DoNotOptimize(control_step(x, u_prev, U_prev, refs, fx.maps, fx.model,
                                           fx.params.T_fct(), cfg));
  }
}
BENCHMARK(BM_ControlStep);

}  // namespace

BENCHMARK_MAIN();
