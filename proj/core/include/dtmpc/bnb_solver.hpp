#pragma once

#include <cstdint>
#include <limits>

#include "dtmpc/prediction.hpp"

namespace dtmpc {

enum class ChildOrder { FixedEnumeration, StageCostAscending };

struct BnbConfig {
  /// Parent-node expansion limit; max() means unlimited.
  std::uint64_t n_p_max = std::numeric_limits<std::uint64_t>::max();
  ChildOrder child_order = ChildOrder::StageCostAscending;

  static constexpr std::uint64_t unlimited = std::numeric_limits<std::uint64_t>::max();
};

struct BnbResult {
  SwitchSequence U_inc;
  double f_inc = 0.0;
  std::uint64_t n_p = 0;   // parent nodes expanded
  bool completed = false;  // true iff the search exhausted the tree before the limit
};

/// Warm start for the next control step: drop the first input triple, shift,
/// repeat the last triple.
SwitchSequence educated_guess(const SwitchSequence& U_prev_opt);

/// Exact minimizer by full enumeration of the ternary hypercube. Guarded to
/// N <= 4; ties broken by the lexicographically smallest sequence
/// (entries ordered -1 < 0 < 1).
std::pair<SwitchSequence, double> exhaustive_search(const ObjectiveData& data);

/// Depth-first search with incremental stage cost and incumbent pruning.
/// Stops early once n_p_max parent nodes have been expanded.
BnbResult branch_and_bound(const ObjectiveData& data, const SwitchSequence& U_init,
                           const BnbConfig& cfg);

/// One stage-cost increment given the predicted state after applying u.
double incremental_cost(double f_prev, const StateVector& x_pred, const Eigen::Vector3d& u,
                        const Eigen::Vector3d& u_prev, const References& refs,
                        const ControllerWeights& weights, double T_fct);

}  // namespace dtmpc
