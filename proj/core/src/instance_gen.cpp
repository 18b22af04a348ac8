#include "dtmpc/instance_gen.hpp"

#include <cmath>

namespace dtmpc {

StateVector InstanceGenerator::random_state() {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> mag(0.8, 1.1);
  std::uniform_real_distribution<double> load(-0.5, 0.5);
  const double phi = angle(rng);
  const double ms = mag(rng);
  const double mr = mag(rng);
  const double delta = load(rng);  // load angle between the two flux vectors
  StateVector x;
  x << ms * std::cos(phi), ms * std::sin(phi),
       mr * std::cos(phi - delta), mr * std::sin(phi - delta);
  return x;
}

Eigen::Vector3d InstanceGenerator::random_ternary_triple() {
  std::uniform_int_distribution<int> tern(-1, 1);
  return Eigen::Vector3d(tern(rng), tern(rng), tern(rng));
}

SwitchSequence InstanceGenerator::random_sequence(int N) {
  std::uniform_int_distribution<int> tern(-1, 1);
  SwitchSequence U(3 * N);
  for (int i = 0; i < 3 * N; ++i) U(i) = tern(rng);
  return U;
}

References InstanceGenerator::random_references() {
  std::uniform_real_distribution<double> torque_ref(-1.0, 1.0);
  std::uniform_real_distribution<double> flux_ref(0.9, 1.1);
  return References{torque_ref(rng), flux_ref(rng)};
}

ObjectiveData InstanceGenerator::random_objective(const HorizonMaps& maps,
                                                  const DiscreteModel& model, double T_fct,
                                                  const ControllerWeights& weights) {
  return build_objective_data(maps, model, T_fct, random_state(), random_ternary_triple(),
                              random_references(), weights);
}

}  // namespace dtmpc
