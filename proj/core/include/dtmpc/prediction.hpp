#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dtmpc/machine_model.hpp"

namespace dtmpc {

/// Full-horizon ternary switch sequence, entries in {-1, 0, 1}.
using SwitchSequence = Eigen::VectorXi;

bool is_ternary(const SwitchSequence& U);

struct ControllerWeights {
  double lambda_T = 0.052;   // torque weighting factor, in [0, 1]
  double lambda_u = 3.8e-3;  // switching weight, >= 0
  int N = 5;                 // prediction horizon

  void validate() const;
};

struct References {
  double T_e_star = 0.2;    // torque reference [pu]
  double Psi_s_star = 1.0;  // stator flux magnitude reference [pu]
};

/// Offline maps from (x(k), U(k)) to the predicted stator/rotor fluxes at
/// each step of the horizon: psi(k+l) = Gamma[l] x(k) + Upsilon[l] U(k).
/// Indexed 0-based, i.e. index l-1 holds the step-l map.
struct HorizonMaps {
  int N = 0;
  std::vector<Eigen::Matrix<double, 2, 4>> Gamma_s, Gamma_r;
  std::vector<Eigen::MatrixXd> Upsilon_s, Upsilon_r;  // 2 x 3N each
};

HorizonMaps build_horizon_maps(const DiscreteModel& model, int N);

/// Everything a solver needs for one control step: per-step quadratic-form
/// matrices in the augmented input [1; U], references, weights, and the raw
/// state/model for stage-wise evaluation.
struct ObjectiveData {
  int N = 0;
  std::vector<Eigen::MatrixXd> Qbar;  // (3N+1)^2, symmetric, torque forms
  std::vector<Eigen::MatrixXd> Wbar;  // (3N+1)^2, symmetric, flux forms
  std::vector<std::array<Eigen::RowVectorXd, 3>> Z;  // per step, one row per phase
  References refs;
  ControllerWeights weights;
  StateVector x_k;
  Eigen::Vector3d u_prev;
  DiscreteModel model;
  double T_fct = 0.0;

  int dim() const { return 3 * N + 1; }
};

ObjectiveData build_objective_data(const HorizonMaps& maps, const DiscreteModel& model,
                                   double T_fct, const StateVector& x_k,
                                   const Eigen::Vector3d& u_prev, const References& refs,
                                   const ControllerWeights& weights);

/// Full-horizon cost of a ternary sequence (degree-4 polynomial in U).
double evaluate_cost(const SwitchSequence& U, const ObjectiveData& data);

/// Same cost expressed through traces against a lifted matrix Theta.
/// Theta must be symmetric (to 1e-9) with Theta(0,0) = 1 intended; only
/// symmetry is enforced here.
double evaluate_lifted_cost(const Eigen::MatrixXd& Theta, const ObjectiveData& data);

/// Augments a sequence with the leading 1: [1; U].
Eigen::VectorXd augment(const SwitchSequence& U);

}  // namespace dtmpc
