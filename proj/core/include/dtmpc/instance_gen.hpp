#pragma once

#include <random>

#include "dtmpc/prediction.hpp"

namespace dtmpc {

/// Draws a physically plausible random control-step instance: flux vectors
/// near nominal magnitude, a ternary previous input, and references in the
/// usual operating range.
struct InstanceGenerator {
  explicit InstanceGenerator(std::uint64_t seed) : rng(seed) {}

  StateVector random_state();
  Eigen::Vector3d random_ternary_triple();
  SwitchSequence random_sequence(int N);
  References random_references();

  ObjectiveData random_objective(const HorizonMaps& maps, const DiscreteModel& model,
                                 double T_fct, const ControllerWeights& weights);

  std::mt19937_64 rng;
};

}  // namespace dtmpc
