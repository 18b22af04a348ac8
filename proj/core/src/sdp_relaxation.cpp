#include "dtmpc/sdp_relaxation.hpp"

#include <cmath>
#include <stdexcept>

namespace dtmpc {

void LiftedMatrix::validate() const {
  if (Theta.rows() != Theta.cols()) throw std::invalid_argument("lifted matrix must be square");
  if ((Theta - Theta.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("lifted matrix must be symmetric");
  if (std::abs(Theta(0, 0) - 1.0) > 1e-6)
    throw std::invalid_argument("lifted matrix must have Theta(0,0) = 1");
}

LiftedMatrix lift(const SwitchSequence& U) {
  const Eigen::VectorXd Ut = augment(U);
  return LiftedMatrix{Ut * Ut.transpose()};
}

SdpProblem build_sdp(const ObjectiveData& data) {
  return SdpProblem{&data, data.dim()};
}

SwitchSequence round_ternary(const Eigen::VectorXd& v) {
  SwitchSequence U(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double r = std::round(v(i));  // half away from zero
    U(i) = static_cast<int>(std::clamp(r, -1.0, 1.0));
  }
  return U;
}

namespace {

int sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

SwitchSequence extract(const LiftedMatrix& lifted, ExtractionMethod method, double psd_tol) {
  lifted.validate();
  const Eigen::MatrixXd& Theta = lifted.Theta;
  const int n = lifted.dim();
  const int m = n - 1;  // number of input coordinates

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Theta);
  if (eig.eigenvalues().minCoeff() < -psd_tol)
    throw std::invalid_argument("lifted matrix is not PSD within tolerance");

  switch (method) {
    case ExtractionMethod::FirstColumn:
      return round_ternary(Theta.col(0).tail(m));
    case ExtractionMethod::Diagonal: {
      Eigen::VectorXd v(m);
      for (int i = 0; i < m; ++i) {
        const double d = std::max(Theta(i + 1, i + 1), 0.0);
        v(i) = sign(Theta(i + 1, 0)) * std::sqrt(d);
      }
      return round_ternary(v);
    }
    case ExtractionMethod::MaxEigenvector: {
      // eigenvalues ascend; the last one is the largest
      Eigen::VectorXd v1 = eig.eigenvectors().col(n - 1);
      if (v1(0) < 0.0) v1 = -v1;  // align with the augmented 1
      const double lam = std::max(eig.eigenvalues()(n - 1), 0.0);
      return round_ternary((std::sqrt(lam) * v1).tail(m));
    }
    case ExtractionMethod::WeightedEigenvectors: {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < n; ++j) {
        Eigen::VectorXd vj = eig.eigenvectors().col(j);
        if (vj(0) < 0.0) vj = -vj;
        acc += std::sqrt(std::max(eig.eigenvalues()(j), 0.0)) * vj;
      }
      return round_ternary(acc.tail(m));
    }
  }
  throw std::logic_error("unknown extraction method");
}

GapBound gap_bound(const SwitchSequence& U_sdp, const LiftedMatrix& Theta_sdp,
                   const ObjectiveData& data) {
  GapBound g;
  g.upper = evaluate_cost(U_sdp, data);
  g.lower = evaluate_lifted_cost(Theta_sdp.Theta, data);
  g.gap = g.upper - g.lower;
  return g;
}

}  // namespace dtmpc
