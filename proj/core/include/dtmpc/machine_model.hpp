#pragma once

#include <Eigen/Dense>

namespace dtmpc {

using StateVector = Eigen::Vector4d;  // [psi_s_alpha, psi_s_beta, psi_r_alpha, psi_r_beta], pu

/// Per-unit electrical parameters of the induction machine.
struct MachineParams {
  double R_s = 0.0108;    // stator resistance [pu]
  double R_r = 0.0091;    // rotor resistance [pu]
  double X_ls = 0.1493;   // stator leakage reactance [pu]
  double X_lr = 0.1104;   // rotor leakage reactance [pu]
  double X_m = 2.3489;    // main reactance [pu]
  // Dc-link voltage on the peak-phase voltage base sqrt(2/3) * V_LL,rms used
  // by the flux model. Datasheets quote V_dc / V_LL,rms = 1.5937; multiplying
  // by sqrt(3/2) moves it onto the model base.
  double V_dc = 1.5937 * 1.2247448713915890;
  int pole_pairs = 5;
  double P_rat = 1.587e6; // rated real power [W]
  double S_rat = 2.0e6;   // rated apparent power [VA]
  double f_base = 50.0;   // base frequency [Hz]

  double X_s() const { return X_ls + X_m; }
  double X_r() const { return X_lr + X_m; }
  double D() const { return X_s() * X_r() - X_m * X_m; }
  double pf() const { return P_rat / S_rat; }
  double T_fct() const { return (1.0 / pf()) * (X_m / D()); }
  double omega_base() const;  // [rad/s]

  /// Throws std::invalid_argument on non-physical values.
  void validate() const;
};

struct OperatingPoint {
  double omega_r = 0.9933;  // rotor electrical angular speed [pu]
};

enum class DiscretizationMethod { ExactZoh, ForwardEuler };

/// Discrete-time flux-linkage model x(k+1) = A x(k) + B u(k).
struct DiscreteModel {
  Eigen::Matrix4d A;
  Eigen::Matrix<double, 4, 3> B;
  double T_c = 0.0;  // sampling interval [s]

  Eigen::Matrix2d A11() const { return A.block<2, 2>(0, 0); }
  Eigen::Matrix2d A12() const { return A.block<2, 2>(0, 2); }
  Eigen::Matrix2d A21() const { return A.block<2, 2>(2, 0); }
  Eigen::Matrix2d A22() const { return A.block<2, 2>(2, 2); }
  Eigen::Matrix<double, 2, 3> B1() const { return B.block<2, 3>(0, 0); }
};

/// Three-phase abc -> stationary alpha-beta frame.
Eigen::Vector2d clarke(const Eigen::Vector3d& xi_abc);

/// alpha-beta -> abc via the pseudo-inverse (3/2) K^T.
Eigen::Vector3d inverse_clarke(const Eigen::Vector2d& xi_ab);

/// Continuous-time flux dynamics dx/dtau = F x + G u, in per-unit time
/// (one pu time unit = 1/omega_base seconds).
void continuous_matrices(const MachineParams& params, const OperatingPoint& op,
                         Eigen::Matrix4d& F, Eigen::Matrix<double, 4, 3>& G);

/// Converts an SI interval to per-unit time.
inline double to_pu_time(double seconds, double f_base) {
  return 2.0 * M_PI * f_base * seconds;
}

/// Exact ZOH discretization via the augmented matrix exponential
/// exp([[F, G], [0, 0]] * T). Forward Euler kept as a comparison option.
DiscreteModel discretize(const Eigen::Matrix4d& F, const Eigen::Matrix<double, 4, 3>& G,
                         double T_pu,
                         DiscretizationMethod method = DiscretizationMethod::ExactZoh);

/// Convenience: assemble and discretize in one step. T_c is in seconds.
DiscreteModel build_discrete_model(const MachineParams& params, const OperatingPoint& op,
                                   double T_c_seconds,
                                   DiscretizationMethod method = DiscretizationMethod::ExactZoh);

/// Electromagnetic torque T_fct * psi_r^T J psi_s [pu].
double torque(const StateVector& x, const MachineParams& params);

/// Squared stator flux magnitude [pu^2].
double flux_mag_sq(const StateVector& x);

/// Stator current i_s = (X_r psi_s - X_m psi_r) / D [pu].
Eigen::Vector2d stator_current(const StateVector& x, const MachineParams& params);

/// One step of the plant under a held input, using a model built at the
/// plant sampling interval.
StateVector plant_step(const DiscreteModel& model, const StateVector& x,
                       const Eigen::Vector3d& u);

}  // namespace dtmpc
