#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "modsel/hypothesis.hpp"
#include "modsel/planning.hpp"
#include "modsel/rng.hpp"

namespace modsel {

/// Noise bounded in [-sigma, sigma], hence sigma-sub-Gaussian.
struct NoiseModel {
  double sigma = 0.0;

  double sample(Rng& rng) const { return sigma * (2.0 * rng.uniform() - 1.0); }
};

/// Bandit environment: true reward function f*, noise scale and the nested
/// family handed to the learner.
class BanditInstance {
 public:
  /// Checks that f* is a valid function on the action set, that the family
  /// is nested and that f* first appears in class m*.
  BanditInstance(FunctionFamily family, HypothesisFunction truth, double sigma);

  const FunctionFamily& family() const { return family_; }
  const HypothesisFunction& truth() const { return truth_; }
  NoiseModel noise() const { return {sigma_}; }
  double sigma() const { return sigma_; }
  std::size_t n_actions() const { return truth_.size(); }
  std::size_t best_action() const { return best_action_; }
  double best_value() const { return best_value_; }

 private:
  FunctionFamily family_;
  HypothesisFunction truth_;
  double sigma_;
  std::size_t best_action_ = 0;
  double best_value_ = 0.0;
};

/// f*(action) + eps, eps uniform on [-sigma, sigma]. No clipping.
double sample_reward(const BanditInstance& instance, std::size_t action, Rng& rng);

/// Episodic MDP with known reward, unknown kernel P* and fixed start state.
class MdpInstance {
 public:
  MdpInstance(KernelFamily family, TransitionKernel truth, RewardTable reward, std::size_t horizon,
              std::size_t initial_state);

  const KernelFamily& family() const { return family_; }
  const TransitionKernel& truth() const { return truth_; }
  const RewardTable& reward() const { return reward_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t initial_state() const { return initial_state_; }
  std::size_t n_states() const { return truth_.n_states(); }
  std::size_t n_actions() const { return truth_.n_actions(); }
  /// Value iteration under P*.
  const ValueTables& optimal() const { return optimal_; }
  double optimal_value() const { return optimal_.v(1, initial_state_); }

 private:
  KernelFamily family_;
  TransitionKernel truth_;
  RewardTable reward_;
  std::size_t horizon_;
  std::size_t initial_state_;
  ValueTables optimal_;
};

/// Draw s' ~ P*(. | state, action).
std::size_t mdp_step(const MdpInstance& instance, std::size_t state, std::size_t action, Rng& rng);

struct ValueBankOptions {
  /// Add V*_{P,h} of every kernel in the family, not only of P*.
  bool all_kernels = false;
  /// Extra seeded random vectors with entries in [0, H].
  std::size_t n_random = 0;
  std::uint64_t seed = 0;
};

/// Value vectors used by the MDP separability check: V*_{P*,h} for h in
/// [1,H], plus whatever `options` adds.
std::vector<std::vector<double>> value_bank(const MdpInstance& instance, const ValueBankOptions& options = {});

}  // namespace modsel
