#include "dtmpc/bnb_solver.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace dtmpc {

namespace {

// All 27 single-step inputs, lexicographic with -1 < 0 < 1.
const std::array<Eigen::Vector3d, 27>& input_set() {
  static const std::array<Eigen::Vector3d, 27> set = [] {
    std::array<Eigen::Vector3d, 27> s;
    int idx = 0;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c) s[idx++] = Eigen::Vector3d(a, b, c);
    return s;
  }();
  return set;
}

double stage_cost(const StateVector& x, const Eigen::Vector3d& u,
                  const Eigen::Vector3d& u_prev, const References& refs,
                  const ControllerWeights& w, double T_fct) {
  const double Te = T_fct * (x(2) * x(1) - x(3) * x(0));
  const double eT = refs.T_e_star - Te;
  const double ePsi = refs.Psi_s_star * refs.Psi_s_star - (x(0) * x(0) + x(1) * x(1));
  return w.lambda_T * eT * eT + (1.0 - w.lambda_T) * ePsi * ePsi +
         w.lambda_u * (u - u_prev).squaredNorm();
}

struct SearchState {
  const ObjectiveData* data;
  const BnbConfig* cfg;
  SwitchSequence U;      // current path
  SwitchSequence U_inc;
  double f_inc;
  std::uint64_t n_p = 0;
  bool limit_hit = false;
};

void search(SearchState& s, int depth, double f_prev, const StateVector& x_prev,
            const Eigen::Vector3d& u_prev) {
  if (s.n_p >= s.cfg->n_p_max) {
    s.limit_hit = true;
    return;
  }
  ++s.n_p;

  const auto& data = *s.data;
  struct Child {
    int idx;
    double f;
    StateVector x;
  };
  std::array<Child, 27> children;
  for (int i = 0; i < 27; ++i) {
    const Eigen::Vector3d& u = input_set()[i];
    const StateVector x = data.model.A * x_prev + data.model.B * u;
    children[i] = {i, f_prev + stage_cost(x, u, u_prev, data.refs, data.weights, data.T_fct), x};
  }
  if (s.cfg->child_order == ChildOrder::StageCostAscending) {
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.f < b.f; });
  }

  for (const Child& c : children) {
    if (s.limit_hit) return;
    if (c.f < s.f_inc) {
      const Eigen::Vector3d& u = input_set()[c.idx];
      s.U.segment<3>(3 * depth) = u.cast<int>();
      if (depth + 1 < data.N) {
        search(s, depth + 1, c.f, c.x, u);
      } else {
        s.U_inc = s.U;
        s.f_inc = c.f;
      }
    }
  }
}

}  // namespace

SwitchSequence educated_guess(const SwitchSequence& U_prev_opt) {
  const int len = static_cast<int>(U_prev_opt.size());
  if (len < 3 || len % 3 != 0) throw std::invalid_argument("sequence length must be 3N");
  SwitchSequence U(len);
  U.head(len - 3) = U_prev_opt.tail(len - 3);
  U.tail<3>() = U_prev_opt.tail<3>();
  return U;
}

std::pair<SwitchSequence, double> exhaustive_search(const ObjectiveData& data) {
  if (data.N > 4) throw std::invalid_argument("exhaustive search guarded to N <= 4");
  const int N = data.N;
  SwitchSequence best;
  double f_best = std::numeric_limits<double>::infinity();
  SwitchSequence U(3 * N);
  std::vector<int> digits(N, 0);  // index into input_set per step, lexicographic
  const std::uint64_t total = [N] {
    std::uint64_t t = 1;
    for (int i = 0; i < N; ++i) t *= 27;
    return t;
  }();
  for (std::uint64_t it = 0; it < total; ++it) {
    std::uint64_t rem = it;
    for (int l = N - 1; l >= 0; --l) {
      digits[l] = static_cast<int>(rem % 27);
      rem /= 27;
    }
    for (int l = 0; l < N; ++l) U.segment<3>(3 * l) = input_set()[digits[l]].cast<int>();
    const double f = evaluate_cost(U, data);
    if (f < f_best) {  // strict: first-found keeps lexicographic tie-break
      f_best = f;
      best = U;
    }
  }
  return {best, f_best};
}

BnbResult branch_and_bound(const ObjectiveData& data, const SwitchSequence& U_init,
                           const BnbConfig& cfg) {
  if (U_init.size() != 3 * data.N) throw std::invalid_argument("initial sequence length mismatch");
  if (!is_ternary(U_init)) throw std::invalid_argument("initial sequence must be ternary");

  SearchState s;
  s.data = &data;
  s.cfg = &cfg;
  s.U = U_init;
  s.U_inc = U_init;
  s.f_inc = evaluate_cost(U_init, data);
  search(s, 0, 0.0, data.x_k, data.u_prev);

  BnbResult result;
  result.U_inc = s.U_inc;
  result.f_inc = s.f_inc;
  result.n_p = s.n_p;
  result.completed = !s.limit_hit;
  return result;
}

double incremental_cost(double f_prev, const StateVector& x_pred, const Eigen::Vector3d& u,
                        const Eigen::Vector3d& u_prev, const References& refs,
                        const ControllerWeights& weights, double T_fct) {
  return f_prev + stage_cost(x_pred, u, u_prev, refs, weights, T_fct);
}

}  // namespace dtmpc
