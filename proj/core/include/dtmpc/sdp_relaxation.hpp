#pragma once

#include <Eigen/Dense>

#include "dtmpc/prediction.hpp"

namespace dtmpc {

/// Symmetric (3N+1)x(3N+1) matrix in the lifted input space. For an exact
/// lifting of a ternary sequence, Theta = [1; U][1; U]^T.
struct LiftedMatrix {
  Eigen::MatrixXd Theta;

  int dim() const { return static_cast<int>(Theta.rows()); }

  /// Throws if the matrix is not symmetric (1e-9) or Theta(0,0) != 1 (1e-6).
  void validate() const;
};

LiftedMatrix lift(const SwitchSequence& U);

/// Relaxed problem: minimize the lifted cost over the PSD cone intersected
/// with the entrywise box [-1, 1] and the slice Theta(0,0) = 1.
struct SdpProblem {
  const ObjectiveData* data = nullptr;
  int n = 0;  // 3N + 1
};

SdpProblem build_sdp(const ObjectiveData& data);

enum class ExtractionMethod { FirstColumn, Diagonal, MaxEigenvector, WeightedEigenvectors };

/// Elementwise nearest value in {-1, 0, 1}; clamps beyond +-1, half-way ties
/// round away from zero.
SwitchSequence round_ternary(const Eigen::VectorXd& v);

/// Maps a lifted solution back to a ternary sequence. Throws if Theta has an
/// eigenvalue below -psd_tol.
SwitchSequence extract(const LiftedMatrix& Theta, ExtractionMethod method,
                       double psd_tol = 1e-4);

struct GapBound {
  double upper = 0.0;  // cost of the extracted sequence
  double lower = 0.0;  // lifted cost of the relaxed solution
  double gap = 0.0;    // upper - lower
};

GapBound gap_bound(const SwitchSequence& U_sdp, const LiftedMatrix& Theta_sdp,
                   const ObjectiveData& data);

}  // namespace dtmpc
