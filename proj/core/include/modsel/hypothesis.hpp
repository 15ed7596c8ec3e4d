#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "modsel/errors.hpp"

namespace modsel {

/// Tolerance for extensional equality of tables (deduplication, membership).
inline constexpr double kEqualityTolerance = 1e-12;

/// Candidate reward function over a finite action set; values lie in [0,1].
struct HypothesisFunction {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator()(std::size_t action) const { return values[action]; }
};

bool approx_equal(const HypothesisFunction& a, const HypothesisFunction& b,
                  double tol = kEqualityTolerance);

/// Throws ConfigError unless `f` has `n_actions` entries, all in [0,1].
void validate_function(const HypothesisFunction& f, std::size_t n_actions);

/// Row-stochastic transition model P(s' | s, a), stored as [s][a][s'].
class TransitionKernel {
 public:
  TransitionKernel() = default;
  /// Validates nonnegativity and that every row sums to 1 within 1e-9.
  TransitionKernel(std::size_t n_states, std::size_t n_actions, std::vector<double> probs);

  static TransitionKernel deterministic(std::size_t n_states, std::size_t n_actions,
                                        std::span<const std::size_t> next_state);

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }
  double prob(std::size_t s, std::size_t a, std::size_t next) const {
    return probs_[(s * n_actions_ + a) * n_states_ + next];
  }
  std::span<const double> row(std::size_t s, std::size_t a) const {
    return {probs_.data() + (s * n_actions_ + a) * n_states_, n_states_};
  }
  const std::vector<double>& data() const { return probs_; }

 private:
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::vector<double> probs_;
};

bool approx_equal(const TransitionKernel& a, const TransitionKernel& b,
                  double tol = kEqualityTolerance);

/// Ordered nested classes C_1 ⊂ ... ⊂ C_M with the index m* of the smallest
/// realizable class. Class indices are 1-based throughout the public API.
template <typename Model>
struct NestedFamily {
  std::vector<std::vector<Model>> classes;
  std::size_t true_index = 1;
  double separation = 0.0;  // Δ
  double locality = 0.0;    // η

  std::size_t size() const { return classes.size(); }
  const std::vector<Model>& at(std::size_t m) const { return classes.at(m - 1); }
  const std::vector<Model>& largest() const { return classes.back(); }

  /// Positions of class m's members inside the largest class (requires nesting).
  std::vector<std::size_t> member_indices(std::size_t m) const {
    const auto& big = largest();
    std::vector<std::size_t> out;
    for (const auto& model : at(m)) {
      std::size_t pos = big.size();
      for (std::size_t j = 0; j < big.size(); ++j) {
        if (approx_equal(model, big[j])) {
          pos = j;
          break;
        }
      }
      if (pos == big.size()) throw ConfigError("family is not nested: member missing from largest class");
      out.push_back(pos);
    }
    return out;
  }
};

using FunctionFamily = NestedFamily<HypothesisFunction>;
using KernelFamily = NestedFamily<TransitionKernel>;

template <typename Model>
bool contains(std::span<const Model> cls, const Model& model) {
  for (const auto& member : cls) {
    if (approx_equal(member, model)) return true;
  }
  return false;
}

template <typename Model>
std::optional<std::size_t> find_member(std::span<const Model> cls, const Model& model) {
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (approx_equal(cls[i], model)) return i;
  }
  return std::nullopt;
}

/// True iff every class is contained in its successor and `truth` first
/// appears in class m*. Throws ConfigError on an empty class list.
template <typename Model>
bool verify_nesting(const NestedFamily<Model>& family, const Model& truth) {
  if (family.classes.empty()) throw ConfigError("nested family has no classes");
  if (family.true_index < 1 || family.true_index > family.size()) return false;
  for (std::size_t m = 1; m < family.size(); ++m) {
    const std::span<const Model> next(family.at(m + 1));
    for (const auto& model : family.at(m)) {
      if (!contains(next, model)) return false;
    }
  }
  for (std::size_t m = 1; m <= family.size(); ++m) {
    const bool member = contains(std::span<const Model>(family.at(m)), truth);
    if (member != (m >= family.true_index)) return false;
  }
  return true;
}

struct SeparabilityViolation {
  std::size_t model = 0;        // index inside class m*-1
  std::size_t first = 0;        // x1, or flattened (s1,a1)
  std::size_t second = 0;       // x2, or flattened (s2,a2)
  std::size_t value_index = 0;  // bank entry (MDP only)
  double gap = 0.0;
};

struct SeparabilityReport {
  /// achieved_gap >= Δ up to kEqualityTolerance.
  bool holds = true;
  /// Infimum of the checked gaps; +inf when no pair qualifies.
  double achieved_gap = std::numeric_limits<double>::infinity();
  std::vector<SeparabilityViolation> violations;
};

/// Exhaustive local-separability check for bandit families over every
/// f in class m*-1 and every ordered action pair with |f*(x1)-f*(x2)| <= η.
SeparabilityReport verify_separability_bandit(const FunctionFamily& family,
                                              const HypothesisFunction& truth);

/// Same check for kernel families, quantified over a finite bank of value
/// vectors. Only a necessary condition for the universally quantified
/// assumption. Throws ConfigError on an empty bank.
SeparabilityReport verify_separability_mdp(const KernelFamily& family,
                                           const TransitionKernel& truth,
                                           std::span<const std::vector<double>> value_bank);

/// Log-cardinality surrogate for the metric entropy of a finite class.
double metric_entropy(std::size_t cardinality, std::optional<double> user_override = std::nullopt);

template <typename Model>
double metric_entropy(std::span<const Model> cls, std::optional<double> user_override = std::nullopt) {
  return metric_entropy(cls.size(), user_override);
}

}  // namespace modsel
