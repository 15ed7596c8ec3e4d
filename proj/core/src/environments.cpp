#include "modsel/environments.hpp"

#include <stdexcept>

namespace modsel {

BanditInstance::BanditInstance(FunctionFamily family, HypothesisFunction truth, double sigma)
    : family_(std::move(family)), truth_(std::move(truth)), sigma_(sigma) {
  if (!(sigma_ >= 0.0)) throw ConfigError("noise scale must be nonnegative");
  if (truth_.size() == 0) throw ConfigError("bandit instance needs at least one action");
  validate_function(truth_, truth_.size());
  for (const auto& cls : family_.classes) {
    if (cls.empty()) throw ConfigError("hypothesis class is empty");
    for (const auto& f : cls) validate_function(f, truth_.size());
  }
  if (!verify_nesting(family_, truth_)) throw ConfigError("family is not nested around the true function");
  best_value_ = truth_(0);
  for (std::size_t x = 1; x < truth_.size(); ++x) {
    if (truth_(x) > best_value_) {
      best_value_ = truth_(x);
      best_action_ = x;
    }
  }
}

double sample_reward(const BanditInstance& instance, std::size_t action, Rng& rng) {
  if (action >= instance.n_actions()) throw std::out_of_range("action index out of range");
  return instance.truth()(action) + instance.noise().sample(rng);
}

MdpInstance::MdpInstance(KernelFamily family, TransitionKernel truth, RewardTable reward, std::size_t horizon,
                         std::size_t initial_state)
    : family_(std::move(family)),
      truth_(std::move(truth)),
      reward_(std::move(reward)),
      horizon_(horizon),
      initial_state_(initial_state),
      optimal_(horizon, truth_.n_states(), truth_.n_actions()) {
  if (horizon_ < 1) throw ConfigError("horizon must be at least 1");
  if (initial_state_ >= truth_.n_states()) throw ConfigError("initial state out of range");
  if (reward_.n_states != truth_.n_states() || reward_.n_actions != truth_.n_actions()) {
    throw ConfigError("reward table shape differs from the kernel");
  }
  validate_reward(reward_);
  for (const auto& cls : family_.classes) {
    if (cls.empty()) throw ConfigError("kernel class is empty");
    for (const auto& p : cls) {
      if (p.n_states() != truth_.n_states() || p.n_actions() != truth_.n_actions()) {
        throw ConfigError("kernel shape differs from the instance");
      }
    }
  }
  if (!verify_nesting(family_, truth_)) throw ConfigError("family is not nested around the true kernel");
  optimal_ = value_iteration(truth_, reward_, horizon_);
}

std::size_t mdp_step(const MdpInstance& instance, std::size_t state, std::size_t action, Rng& rng) {
  if (state >= instance.n_states() || action >= instance.n_actions()) {
    throw std::out_of_range("state or action index out of range");
  }
  return rng.categorical(instance.truth().row(state, action));
}

std::vector<std::vector<double>> value_bank(const MdpInstance& instance, const ValueBankOptions& options) {
  std::vector<std::vector<double>> bank;
  auto add_optimal = [&](const TransitionKernel& kernel) {
    const auto tables = value_iteration(kernel, instance.reward(), instance.horizon());
    for (std::size_t h = 1; h <= instance.horizon(); ++h) {
      const auto v = tables.values(h);
      bank.emplace_back(v.begin(), v.end());
    }
  };
  add_optimal(instance.truth());
  if (options.all_kernels) {
    for (const auto& kernel : instance.family().largest()) {
      if (!approx_equal(kernel, instance.truth())) add_optimal(kernel);
    }
  }
  Rng rng(options.seed);
  for (std::size_t i = 0; i < options.n_random; ++i) {
    std::vector<double> v(instance.n_states());
    for (auto& x : v) x = rng.uniform(0.0, static_cast<double>(instance.horizon()));
    bank.push_back(std::move(v));
  }
  return bank;
}

}  // namespace modsel
