#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "modsel/hypothesis.hpp"

namespace modsel {

/// Known reward r(s,a) in [0,1], stored as [s][a].
struct RewardTable {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  std::vector<double> values;

  double operator()(std::size_t s, std::size_t a) const { return values[s * n_actions + a]; }
};

void validate_reward(const RewardTable& reward);

/// Finite-horizon Q and V tables. Steps are 1-based: Q_h for h in [1,H],
/// V_h for h in [1,H+1] with V_{H+1} = 0.
class ValueTables {
 public:
  ValueTables(std::size_t horizon, std::size_t n_states, std::size_t n_actions);

  std::size_t horizon() const { return horizon_; }
  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }

  double& q(std::size_t h, std::size_t s, std::size_t a) { return q_[((h - 1) * n_states_ + s) * n_actions_ + a]; }
  double q(std::size_t h, std::size_t s, std::size_t a) const {
    return q_[((h - 1) * n_states_ + s) * n_actions_ + a];
  }
  double& v(std::size_t h, std::size_t s) { return v_[(h - 1) * n_states_ + s]; }
  double v(std::size_t h, std::size_t s) const { return v_[(h - 1) * n_states_ + s]; }
  std::span<const double> values(std::size_t h) const { return {v_.data() + (h - 1) * n_states_, n_states_}; }
  /// V_1..V_{H+1}, concatenated.
  const std::vector<double>& all_values() const { return v_; }

 private:
  std::size_t horizon_;
  std::size_t n_states_;
  std::size_t n_actions_;
  std::vector<double> q_;
  std::vector<double> v_;
};

/// Nonstationary deterministic policy pi_h(s), h in [1,H].
struct GreedyPolicy {
  std::size_t horizon = 0;
  std::size_t n_states = 0;
  std::vector<std::size_t> actions;

  std::size_t operator()(std::size_t h, std::size_t s) const { return actions[(h - 1) * n_states + s]; }
};

/// (PV)(s,a) = sum_s' P(s'|s,a) V(s'), returned as [s][a].
std::vector<double> apply_kernel(const TransitionKernel& kernel, std::span<const double> values);

/// Backward induction from V_{H+1} = 0.
ValueTables value_iteration(const TransitionKernel& kernel, const RewardTable& reward, std::size_t horizon);

/// Argmax of Q_h(s,.) with lowest-index ties.
GreedyPolicy greedy_policy(const ValueTables& tables);

/// Exact V^pi_1 for all states.
std::vector<double> policy_evaluation(const GreedyPolicy& policy, const TransitionKernel& kernel,
                                      const RewardTable& reward, std::size_t horizon);

}  // namespace modsel
