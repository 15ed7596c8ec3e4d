#include "modsel/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modsel/planning.hpp"

namespace modsel {

bool approx_equal(const HypothesisFunction& a, const HypothesisFunction& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.values[i] - b.values[i]) > tol) return false;
  }
  return true;
}

void validate_function(const HypothesisFunction& f, std::size_t n_actions) {
  if (f.size() != n_actions) {
    throw ConfigError("hypothesis function has " + std::to_string(f.size()) + " values, expected " +
                      std::to_string(n_actions));
  }
  for (double v : f.values) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("hypothesis value outside [0,1]");
  }
}

TransitionKernel::TransitionKernel(std::size_t n_states, std::size_t n_actions, std::vector<double> probs)
    : n_states_(n_states), n_actions_(n_actions), probs_(std::move(probs)) {
  if (n_states_ == 0 || n_actions_ == 0) throw ConfigError("kernel needs at least one state and action");
  if (probs_.size() != n_states_ * n_actions_ * n_states_) throw ConfigError("kernel tensor has wrong size");
  for (std::size_t s = 0; s < n_states_; ++s) {
    for (std::size_t a = 0; a < n_actions_; ++a) {
      double total = 0.0;
      for (double p : row(s, a)) {
        if (!(p >= 0.0)) throw ConfigError("kernel has a negative entry");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("kernel row (" + std::to_string(s) + "," + std::to_string(a) + ") sums to " +
                          std::to_string(total));
      }
    }
  }
}

TransitionKernel TransitionKernel::deterministic(std::size_t n_states, std::size_t n_actions,
                                                 std::span<const std::size_t> next_state) {
  if (next_state.size() != n_states * n_actions) throw ConfigError("deterministic kernel: wrong successor count");
  std::vector<double> probs(n_states * n_actions * n_states, 0.0);
  for (std::size_t i = 0; i < next_state.size(); ++i) {
    if (next_state[i] >= n_states) throw ConfigError("deterministic kernel: successor out of range");
    probs[i * n_states + next_state[i]] = 1.0;
  }
  return {n_states, n_actions, std::move(probs)};
}

bool approx_equal(const TransitionKernel& a, const TransitionKernel& b, double tol) {
  if (a.n_states() != b.n_states() || a.n_actions() != b.n_actions()) return false;
  const auto& x = a.data();
  const auto& y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - y[i]) > tol) return false;
  }
  return true;
}

SeparabilityReport verify_separability_bandit(const FunctionFamily& family, const HypothesisFunction& truth) {
  SeparabilityReport report;
  if (family.true_index <= 1) return report;
  const double eta = family.locality;
  const std::size_t n = truth.size();
  const auto& rivals = family.at(family.true_index - 1);
  for (std::size_t k = 0; k < rivals.size(); ++k) {
    if (rivals[k].size() != n) throw ConfigError("function domain differs from the action set");
    for (std::size_t x1 = 0; x1 < n; ++x1) {
      for (std::size_t x2 = 0; x2 < n; ++x2) {
        if (x1 == x2 || std::abs(truth(x1) - truth(x2)) > eta) continue;
        const double gap = std::abs(rivals[k](x1) - truth(x2));
        report.achieved_gap = std::min(report.achieved_gap, gap);
        if (gap < family.separation - kEqualityTolerance) report.violations.push_back({k, x1, x2, 0, gap});
      }
    }
  }
  report.holds = report.achieved_gap >= family.separation - kEqualityTolerance;
  return report;
}

SeparabilityReport verify_separability_mdp(const KernelFamily& family, const TransitionKernel& truth,
                                           std::span<const std::vector<double>> value_bank) {
  if (value_bank.empty()) throw ConfigError("separability check needs a nonempty value bank");
  SeparabilityReport report;
  if (family.true_index <= 1) return report;
  const double eta = family.locality;
  const auto& rivals = family.at(family.true_index - 1);
  const std::size_t pairs = truth.n_states() * truth.n_actions();
  for (std::size_t v = 0; v < value_bank.size(); ++v) {
    const auto true_backup = apply_kernel(truth, value_bank[v]);
    for (std::size_t k = 0; k < rivals.size(); ++k) {
      const auto rival_backup = apply_kernel(rivals[k], value_bank[v]);
      for (std::size_t z1 = 0; z1 < pairs; ++z1) {
        for (std::size_t z2 = 0; z2 < pairs; ++z2) {
          if (z1 == z2 || std::abs(true_backup[z1] - true_backup[z2]) > eta) continue;
          const double gap = std::abs(rival_backup[z1] - true_backup[z2]);
          report.achieved_gap = std::min(report.achieved_gap, gap);
          if (gap < family.separation - kEqualityTolerance) report.violations.push_back({k, z1, z2, v, gap});
        }
      }
    }
  }
  report.holds = report.achieved_gap >= family.separation - kEqualityTolerance;
  return report;
}

double metric_entropy(std::size_t cardinality, std::optional<double> user_override) {
  if (cardinality == 0) throw ConfigError("metric entropy of an empty class");
  if (user_override) return *user_override;
  return std::log(static_cast<double>(cardinality));
}

}  // namespace modsel
