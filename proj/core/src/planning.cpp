#include "modsel/planning.hpp"

#include <stdexcept>

namespace modsel {

void validate_reward(const RewardTable& reward) {
  if (reward.values.size() != reward.n_states * reward.n_actions) throw ConfigError("reward table has wrong size");
  for (double r : reward.values) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("reward entry outside [0,1]");
  }
}

ValueTables::ValueTables(std::size_t horizon, std::size_t n_states, std::size_t n_actions)
    : horizon_(horizon),
      n_states_(n_states),
      n_actions_(n_actions),
      q_(horizon * n_states * n_actions, 0.0),
      v_((horizon + 1) * n_states, 0.0) {}

std::vector<double> apply_kernel(const TransitionKernel& kernel, std::span<const double> values) {
  if (values.size() != kernel.n_states()) throw std::invalid_argument("value vector length differs from state count");
  const std::size_t S = kernel.n_states();
  const std::size_t A = kernel.n_actions();
  std::vector<double> out(S * A, 0.0);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      const auto row = kernel.row(s, a);
      double acc = 0.0;
      for (std::size_t next = 0; next < S; ++next) acc += row[next] * values[next];
      out[s * A + a] = acc;
    }
  }
  return out;
}

ValueTables value_iteration(const TransitionKernel& kernel, const RewardTable& reward, std::size_t horizon) {
  const std::size_t S = kernel.n_states();
  const std::size_t A = kernel.n_actions();
  if (reward.n_states != S || reward.n_actions != A) throw std::invalid_argument("reward and kernel shapes differ");
  ValueTables tables(horizon, S, A);
  for (std::size_t h = horizon; h >= 1; --h) {
    const auto backup = apply_kernel(kernel, tables.values(h + 1));
    for (std::size_t s = 0; s < S; ++s) {
      double best = 0.0;
      for (std::size_t a = 0; a < A; ++a) {
        const double q = reward(s, a) + backup[s * A + a];
        tables.q(h, s, a) = q;
        if (a == 0 || q > best) best = q;
      }
      tables.v(h, s) = best;
    }
  }
  return tables;
}

GreedyPolicy greedy_policy(const ValueTables& tables) {
  GreedyPolicy policy{tables.horizon(), tables.n_states(), {}};
  policy.actions.resize(tables.horizon() * tables.n_states());
  for (std::size_t h = 1; h <= tables.horizon(); ++h) {
    for (std::size_t s = 0; s < tables.n_states(); ++s) {
      std::size_t best = 0;
      for (std::size_t a = 1; a < tables.n_actions(); ++a) {
        if (tables.q(h, s, a) > tables.q(h, s, best)) best = a;
      }
      policy.actions[(h - 1) * tables.n_states() + s] = best;
    }
  }
  return policy;
}

std::vector<double> policy_evaluation(const GreedyPolicy& policy, const TransitionKernel& kernel,
                                      const RewardTable& reward, std::size_t horizon) {
  const std::size_t S = kernel.n_states();
  if (policy.horizon < horizon || policy.n_states != S) throw std::invalid_argument("policy does not cover the horizon");
  std::vector<double> next(S, 0.0);
  std::vector<double> current(S, 0.0);
  for (std::size_t h = horizon; h >= 1; --h) {
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t a = policy(h, s);
      const auto row = kernel.row(s, a);
      // Same summation order as value_iteration, so an optimal policy
      // reproduces V* bit for bit.
      double acc = 0.0;
      for (std::size_t sn = 0; sn < S; ++sn) acc += row[sn] * next[sn];
      current[s] = reward(s, a) + acc;
    }
    next.swap(current);
  }
  return next;
}

}  // namespace modsel
