#include "dtmpc/prediction.hpp"

#include <stdexcept>

namespace dtmpc {

bool is_ternary(const SwitchSequence& U) {
  for (int i = 0; i < U.size(); ++i) {
    if (U(i) < -1 || U(i) > 1) return false;
  }
  return true;
}

void ControllerWeights::validate() const {
  if (lambda_T < 0.0 || lambda_T > 1.0)
    throw std::invalid_argument("lambda_T must be in [0, 1]");
  if (lambda_u < 0.0) throw std::invalid_argument("lambda_u must be nonnegative");
  if (N < 1) throw std::invalid_argument("horizon must be at least 1");
}

HorizonMaps build_horizon_maps(const DiscreteModel& model, int N) {
  if (N < 1) throw std::invalid_argument("horizon must be at least 1");
  HorizonMaps maps;
  maps.N = N;
  maps.Gamma_s.resize(N);
  maps.Gamma_r.resize(N);
  maps.Upsilon_s.assign(N, Eigen::MatrixXd::Zero(2, 3 * N));
  maps.Upsilon_r.assign(N, Eigen::MatrixXd::Zero(2, 3 * N));

  const Eigen::Matrix<double, 2, 4> Cs =
      (Eigen::Matrix<double, 2, 4>() << model.A11(), model.A12()).finished();
  const Eigen::Matrix<double, 2, 4> Cr =
      (Eigen::Matrix<double, 2, 4>() << model.A21(), model.A22()).finished();

  // A^j cache, j = 0..N-1
  std::vector<Eigen::Matrix4d> Apow(N);
  Apow[0].setIdentity();
  for (int j = 1; j < N; ++j) Apow[j] = model.A * Apow[j - 1];

  for (int l = 1; l <= N; ++l) {
    maps.Gamma_s[l - 1] = Cs * Apow[l - 1];
    maps.Gamma_r[l - 1] = Cr * Apow[l - 1];
    // column block j (0-based) multiplies u(k+j); step l depends on u(k..k+l-1)
    for (int j = 0; j < l; ++j) {
      const int power = l - 1 - j;  // A^(l-1-j) B in the chain
      if (power == 0) {
        // full B: under the exact ZOH its rotor rows are nonzero (O(tau^2)),
        // so the trailing Upsilon_r block is small but not dropped
        maps.Upsilon_s[l - 1].block<2, 3>(0, 3 * j) = model.B.topRows<2>();
        maps.Upsilon_r[l - 1].block<2, 3>(0, 3 * j) = model.B.bottomRows<2>();
      } else {
        const Eigen::Matrix<double, 4, 3> AB = Apow[power - 1] * model.B;
        maps.Upsilon_s[l - 1].block<2, 3>(0, 3 * j) = Cs * AB;
        maps.Upsilon_r[l - 1].block<2, 3>(0, 3 * j) = Cr * AB;
      }
    }
  }
  return maps;
}

ObjectiveData build_objective_data(const HorizonMaps& maps, const DiscreteModel& model,
                                   double T_fct, const StateVector& x_k,
                                   const Eigen::Vector3d& u_prev, const References& refs,
                                   const ControllerWeights& weights) {
  weights.validate();
  if (weights.N != maps.N) throw std::invalid_argument("horizon mismatch");
  const int N = maps.N;
  const int n = 3 * N + 1;

  ObjectiveData data;
  data.N = N;
  data.refs = refs;
  data.weights = weights;
  data.x_k = x_k;
  data.u_prev = u_prev;
  data.model = model;
  data.T_fct = T_fct;
  data.Qbar.resize(N);
  data.Wbar.resize(N);
  data.Z.resize(N);

  Eigen::Matrix2d J;
  J << 0.0, 1.0,
      -1.0, 0.0;

  for (int l = 0; l < N; ++l) {
    const auto& Gs = maps.Gamma_s[l];
    const auto& Gr = maps.Gamma_r[l];
    const auto& Us = maps.Upsilon_s[l];
    const auto& Ur = maps.Upsilon_r[l];

    Eigen::MatrixXd Q(n, n);
    Q(0, 0) = x_k.dot(Gr.transpose() * J * Gs * x_k);
    Q.block(0, 1, 1, 3 * N) = x_k.transpose() * Gr.transpose() * J * Us;
    Q.block(1, 0, 3 * N, 1) = Ur.transpose() * J * Gs * x_k;
    Q.block(1, 1, 3 * N, 3 * N) = Ur.transpose() * J * Us;
    Q *= T_fct;
    data.Qbar[l] = 0.5 * (Q + Q.transpose());  // J is skew, so Q itself is not symmetric

    Eigen::MatrixXd W(n, n);
    W(0, 0) = (Gs * x_k).squaredNorm();
    W.block(0, 1, 1, 3 * N) = x_k.transpose() * Gs.transpose() * Us;
    W.block(1, 0, 3 * N, 1) = Us.transpose() * Gs * x_k;
    W.block(1, 1, 3 * N, 3 * N) = Us.transpose() * Us;
    data.Wbar[l] = 0.5 * (W + W.transpose());

    for (int z = 0; z < 3; ++z) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
      if (l == 0) {
        row(0) = -u_prev(z);
        row(1 + z) = 1.0;
      } else {
        row(1 + 3 * (l - 1) + z) = -1.0;
        row(1 + 3 * l + z) = 1.0;
      }
      data.Z[l][z] = row;
    }
  }
  return data;
}

Eigen::VectorXd augment(const SwitchSequence& U) {
  Eigen::VectorXd Ut(U.size() + 1);
  Ut(0) = 1.0;
  Ut.tail(U.size()) = U.cast<double>();
  return Ut;
}

double evaluate_cost(const SwitchSequence& U, const ObjectiveData& data) {
  if (U.size() != 3 * data.N) throw std::invalid_argument("sequence length mismatch");
  if (!is_ternary(U)) throw std::invalid_argument("sequence entries must be in {-1, 0, 1}");
  const Eigen::VectorXd Ut = augment(U);
  double f = 0.0;
  for (int l = 0; l < data.N; ++l) {
    const double eT = data.refs.T_e_star - Ut.dot(data.Qbar[l] * Ut);
    const double ePsi = data.refs.Psi_s_star * data.refs.Psi_s_star - Ut.dot(data.Wbar[l] * Ut);
    double sw = 0.0;
    for (int z = 0; z < 3; ++z) {
      const double du = data.Z[l][z].dot(Ut);
      sw += du * du;
    }
    f += data.weights.lambda_T * eT * eT +
         (1.0 - data.weights.lambda_T) * ePsi * ePsi + data.weights.lambda_u * sw;
  }
  return f;
}

double evaluate_lifted_cost(const Eigen::MatrixXd& Theta, const ObjectiveData& data) {
  const int n = data.dim();
  if (Theta.rows() != n || Theta.cols() != n)
    throw std::invalid_argument("lifted matrix size mismatch");
  if ((Theta - Theta.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("lifted matrix must be symmetric");
  double f = 0.0;
  for (int l = 0; l < data.N; ++l) {
    const double eT = data.refs.T_e_star - (data.Qbar[l] * Theta).trace();
    const double ePsi =
        data.refs.Psi_s_star * data.refs.Psi_s_star - (data.Wbar[l] * Theta).trace();
    double sw = 0.0;
    for (int z = 0; z < 3; ++z) {
      sw += (data.Z[l][z].transpose() * data.Z[l][z] * Theta).trace();
    }
    f += data.weights.lambda_T * eT * eT +
         (1.0 - data.weights.lambda_T) * ePsi * ePsi + data.weights.lambda_u * sw;
  }
  return f;
}

}  // namespace dtmpc
