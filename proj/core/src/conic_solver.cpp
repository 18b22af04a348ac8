#include "dtmpc/conic_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace dtmpc {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Scaled half-vectorization: preserves inner products, i.e.
// tr(A B) = svec(A) . svec(B) for symmetric A, B.
Eigen::VectorXd svec(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXd v(n * (n + 1) / 2);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    v(k++) = A(j, j);
    for (int i = j + 1; i < n; ++i) v(k++) = kSqrt2 * A(i, j);
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v, int n) {
  Eigen::MatrixXd A(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    A(j, j) = v(k++);
    for (int i = j + 1; i < n; ++i) {
      A(i, j) = v(k) / kSqrt2;
      A(j, i) = A(i, j);
      ++k;
    }
  }
  return A;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (rho <= 0.0) throw std::invalid_argument("rho must be positive");
  if (eps_primal <= 0.0 || eps_dual <= 0.0)
    throw std::invalid_argument("tolerances must be positive");
  if (over_relaxation < 1.0 || over_relaxation >= 2.0)
    throw std::invalid_argument("over_relaxation must be in [1, 2)");
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M) {
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd project_box_slice(const Eigen::MatrixXd& M) {
  Eigen::MatrixXd P = M.cwiseMin(1.0).cwiseMax(-1.0);
  P = 0.5 * (P + P.transpose());
  P(0, 0) = 1.0;
  return P;
}

SolveReport solve(const SdpProblem& problem, const SolverConfig& cfg,
                  const std::optional<LiftedMatrix>& warm_start) {
  cfg.validate();
  if (problem.data == nullptr) throw std::invalid_argument("problem has no objective data");
  const ObjectiveData& data = *problem.data;
  const int n = problem.n;
  const int m = n * (n + 1) / 2;
  const double rho = cfg.rho;
  const double alpha = cfg.over_relaxation;

  // Quadratic objective in the half-vectorized space:
  //   f(theta) = sum_i w_i (c_i - q_i . theta)^2 + g . theta
  struct Term {
    double w, c;
    Eigen::VectorXd q;
  };
  std::vector<Term> terms;
  terms.reserve(2 * data.N);
  for (int l = 0; l < data.N; ++l) {
    terms.push_back({data.weights.lambda_T, data.refs.T_e_star, svec(data.Qbar[l])});
    terms.push_back({1.0 - data.weights.lambda_T,
                     data.refs.Psi_s_star * data.refs.Psi_s_star, svec(data.Wbar[l])});
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
  for (int l = 0; l < data.N; ++l)
    for (int z = 0; z < 3; ++z) {
      const Eigen::MatrixXd ZZ =
          data.Z[l][z].transpose() * data.Z[l][z];
      g += data.weights.lambda_u * svec(ZZ);
    }

  Eigen::MatrixXd H = rho * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd lin = -g;  // constant part of the prox rhs
  for (const Term& t : terms) {
    H.noalias() += 2.0 * t.w * t.q * t.q.transpose();
    lin += 2.0 * t.w * t.c * t.q;
  }
  const Eigen::LDLT<Eigen::MatrixXd> prox_solver(H);

  // Consensus variable and per-block copies/duals.
  Eigen::VectorXd z;
  if (warm_start) {
    warm_start->validate();
    z = svec(warm_start->Theta);
  } else {
    Eigen::MatrixXd T0 = Eigen::MatrixXd::Zero(n, n);
    T0(0, 0) = 1.0;
    z = svec(T0);
  }
  std::array<Eigen::VectorXd, 3> x, u;
  for (int i = 0; i < 3; ++i) {
    x[i] = z;
    u[i] = Eigen::VectorXd::Zero(m);
  }

  SolveReport report;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Eigen::VectorXd z_old = z;

    x[0] = prox_solver.solve(lin + rho * (z - u[0]));
    x[1] = svec(project_psd(smat(z - u[1], n)));
    x[2] = svec(project_box_slice(smat(z - u[2], n)));

    std::array<Eigen::VectorXd, 3> xh;
    for (int i = 0; i < 3; ++i) xh[i] = alpha * x[i] + (1.0 - alpha) * z_old;

    z = (xh[0] + u[0] + xh[1] + u[1] + xh[2] + u[2]) / 3.0;
    for (int i = 0; i < 3; ++i) u[i] += xh[i] - z;

    double r2 = 0.0, xnorm2 = 0.0, unorm2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      r2 += (x[i] - z).squaredNorm();
      xnorm2 += x[i].squaredNorm();
      unorm2 += u[i].squaredNorm();
    }
    report.primal_residual = std::sqrt(r2) / std::max(1.0, std::sqrt(xnorm2));
    report.dual_residual =
        rho * std::sqrt(3.0) * (z - z_old).norm() / std::max(1.0, rho * std::sqrt(unorm2));
    report.iters = iter;
    if (report.primal_residual <= cfg.eps_primal && report.dual_residual <= cfg.eps_dual) {
      report.status = SolveStatus::Converged;
      break;
    }
  }

  // Box and slice exact at exit; PSD holds within the achieved residual.
  Eigen::MatrixXd Theta = project_box_slice(project_psd(smat(z, n)));
  report.Theta = LiftedMatrix{Theta};
  report.objective = evaluate_lifted_cost(Theta, data);
  return report;
}

}  // namespace dtmpc
