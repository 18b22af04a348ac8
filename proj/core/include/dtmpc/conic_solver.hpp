#pragma once

#include <functional>
#include <optional>

#include "dtmpc/sdp_relaxation.hpp"

namespace dtmpc {

struct SolverConfig {
  int max_iters = 120;
  double rho = 0.2;             // ADMM penalty
  double eps_primal = 1e-4;
  double eps_dual = 1e-4;
  double over_relaxation = 1.5; // in [1, 2)

  void validate() const;
};

enum class SolveStatus { Converged, IterLimit };

struct SolveReport {
  LiftedMatrix Theta;
  double objective = 0.0;
  int iters = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  SolveStatus status = SolveStatus::IterLimit;
};

/// Euclidean projection onto the PSD cone: negative eigenvalues clipped.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M);

/// Entrywise clamp to [-1, 1], pin entry (0,0) to 1, symmetrize.
Eigen::MatrixXd project_box_slice(const Eigen::MatrixXd& M);

/// Three-block consensus ADMM over the half-vectorized matrix space:
/// quadratic-objective prox, PSD projection, box/slice projection. An
/// optional warm start seeds the consensus variable.
SolveReport solve(const SdpProblem& problem, const SolverConfig& cfg,
                  const std::optional<LiftedMatrix>& warm_start = std::nullopt);

/// Any backend with this signature can stand in for the reference solver.
using SdpBackend = std::function<SolveReport(const SdpProblem&, const SolverConfig&,
                                             const std::optional<LiftedMatrix>&)>;

}  // namespace dtmpc
