#include "dtmpc/machine_model.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace dtmpc {

namespace {

Eigen::Matrix<double, 2, 3> clarke_matrix() {
  Eigen::Matrix<double, 2, 3> K;
  K << 1.0, -0.5, -0.5,
       0.0, std::sqrt(3.0) / 2.0, -std::sqrt(3.0) / 2.0;
  return (2.0 / 3.0) * K;
}

}  // namespace

double MachineParams::omega_base() const { return 2.0 * M_PI * f_base; }

void MachineParams::validate() const {
  if (R_s <= 0.0 || R_r <= 0.0) throw std::invalid_argument("resistances must be positive");
  if (X_ls <= 0.0 || X_lr <= 0.0 || X_m <= 0.0)
    throw std::invalid_argument("reactances must be positive");
  if (D() <= 0.0) throw std::invalid_argument("D = X_s X_r - X_m^2 must be positive");
  if (V_dc <= 0.0) throw std::invalid_argument("V_dc must be positive");
  const double p = pf();
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("power factor must be in (0, 1]");
  if (f_base <= 0.0) throw std::invalid_argument("f_base must be positive");
}

Eigen::Vector2d clarke(const Eigen::Vector3d& xi_abc) {
  return clarke_matrix() * xi_abc;
}

Eigen::Vector3d inverse_clarke(const Eigen::Vector2d& xi_ab) {
  return 1.5 * clarke_matrix().transpose() * xi_ab;
}

void continuous_matrices(const MachineParams& params, const OperatingPoint& op,
                         Eigen::Matrix4d& F, Eigen::Matrix<double, 4, 3>& G) {
  params.validate();
  const double D = params.D();
  const double Xs = params.X_s();
  const double Xr = params.X_r();
  const double Xm = params.X_m;

  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d rot;  // omega_r coupling block
  rot << 0.0, -1.0,
         1.0, 0.0;

  F.setZero();
  F.block<2, 2>(0, 0) = -params.R_s * (Xr / D) * I;
  F.block<2, 2>(0, 2) = params.R_s * (Xm / D) * I;
  F.block<2, 2>(2, 0) = params.R_r * (Xm / D) * I;
  F.block<2, 2>(2, 2) = -params.R_r * (Xs / D) * I + op.omega_r * rot;

  G.setZero();
  G.block<2, 3>(0, 0) = (params.V_dc / 2.0) * clarke_matrix();
}

DiscreteModel discretize(const Eigen::Matrix4d& F, const Eigen::Matrix<double, 4, 3>& G,
                         double T_pu, DiscretizationMethod method) {
  if (T_pu < 0.0) throw std::invalid_argument("sampling interval must be nonnegative");
  DiscreteModel model;
  if (method == DiscretizationMethod::ForwardEuler) {
    model.A = Eigen::Matrix4d::Identity() + F * T_pu;
    model.B = G * T_pu;
    return model;
  }
  Eigen::Matrix<double, 7, 7> aug = Eigen::Matrix<double, 7, 7>::Zero();
  aug.block<4, 4>(0, 0) = F;
  aug.block<4, 3>(0, 4) = G;
  const Eigen::Matrix<double, 7, 7> expm = (aug * T_pu).exp();
  model.A = expm.block<4, 4>(0, 0);
  model.B = expm.block<4, 3>(0, 4);
  return model;
}

DiscreteModel build_discrete_model(const MachineParams& params, const OperatingPoint& op,
                                   double T_c_seconds, DiscretizationMethod method) {
  Eigen::Matrix4d F;
  Eigen::Matrix<double, 4, 3> G;
  continuous_matrices(params, op, F, G);
  DiscreteModel model = discretize(F, G, to_pu_time(T_c_seconds, params.f_base), method);
  model.T_c = T_c_seconds;
  return model;
}

double torque(const StateVector& x, const MachineParams& params) {
  // T_fct * psi_r^T J psi_s with J = [[0, 1], [-1, 0]]
  return params.T_fct() * (x(2) * x(1) - x(3) * x(0));
}

double flux_mag_sq(const StateVector& x) {
  return x(0) * x(0) + x(1) * x(1);
}

Eigen::Vector2d stator_current(const StateVector& x, const MachineParams& params) {
  return (params.X_r() * x.head<2>() - params.X_m * x.tail<2>()) / params.D();
}

StateVector plant_step(const DiscreteModel& model, const StateVector& x,
                       const Eigen::Vector3d& u) {
  return model.A * x + model.B * u;
}

}  // namespace dtmpc
