#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "modsel/environments.hpp"
#include "modsel/epochs.hpp"

namespace modsel {

/// Append-only history of (action, reward) pairs. Per-action counts, running
/// means and centred second moments make squared-loss queries O(|X|).
class BanditDataset {
 public:
  explicit BanditDataset(std::size_t n_actions);

  void append(std::size_t action, double reward);
  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  std::size_t n_actions() const { return count_.size(); }
  std::span<const std::size_t> actions() const { return actions_; }
  std::span<const double> rewards() const { return rewards_; }

  /// Σ_s (y_s - f(x_s))^2.
  double loss(const HypothesisFunction& f) const;
  /// Σ_s (f(x_s) - g(x_s))^2.
  double discrepancy(const HypothesisFunction& f, const HypothesisFunction& g) const;

 private:
  std::vector<std::size_t> actions_;
  std::vector<double> rewards_;
  std::vector<std::size_t> count_;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

struct FitResult {
  std::size_t index = 0;  // position inside the class
  double loss = 0.0;
};

/// Least squares over a finite class, lowest index on ties.
FitResult least_squares_fit(std::span<const HypothesisFunction> cls, const BanditDataset& data);

/// β_t(F, δ) = 8σ²(ln 2 + entropy + ln(1/δ)) + 2(8 + sqrt(8σ² ln(8t(t+1)/δ))).
double beta_bandit(double class_entropy, std::size_t t, double delta, double sigma);

struct ConfidenceState {
  std::size_t estimate = 0;  // index of f̂ in the class
  double width = 0.0;        // β
  std::vector<std::size_t> members;
};

ConfidenceState build_confidence_set(std::span<const HypothesisFunction> cls, const BanditDataset& data, double beta);

struct OptimisticChoice {
  std::size_t action = 0;
  double ucb = 0.0;
};

/// argmax_x max_{f in members} f(x); lowest action, then lowest member, on ties.
OptimisticChoice optimistic_action(std::span<const HypothesisFunction> cls, const ConfidenceState& conf);

/// One run of the optimistic least-squares base learner on a fixed class.
class BanditLearner {
 public:
  BanditLearner(std::span<const HypothesisFunction> cls, std::size_t n_actions, double delta, double sigma,
                std::optional<double> entropy_override = std::nullopt);

  /// Builds C_t from the data so far and returns the optimistic action.
  OptimisticChoice choose();
  void observe(std::size_t action, double reward);

  /// Whether class member `index` lies in the most recent confidence set.
  bool covers(std::size_t index) const;
  const ConfidenceState& confidence() const { return conf_; }
  const BanditDataset& data() const { return data_; }
  std::size_t round() const { return data_.size() + 1; }

 private:
  std::span<const HypothesisFunction> cls_;
  BanditDataset data_;
  double delta_;
  double sigma_;
  double entropy_;
  ConfidenceState conf_;
};

struct RoundRecord {
  std::size_t round = 0;  // global, 1-based
  std::size_t epoch = 1;
  std::size_t selected_class = 1;
  std::size_t action = 0;
  double reward = 0.0;
  double instant_regret = 0.0;
  double cum_regret = 0.0;
  bool truth_covered = false;
};

struct RunTrace {
  std::vector<RoundRecord> rounds;
  std::vector<EpochRecord> epochs;

  double final_regret() const { return rounds.empty() ? 0.0 : rounds.back().cum_regret; }
  /// f* stayed inside every confidence set that was used.
  bool covered() const;
};

/// Base learner on `cls` for `horizon` rounds. `class_label` only fills the
/// selected_class column.
RunTrace bandit_learning_run(std::span<const HypothesisFunction> cls, const BanditInstance& instance,
                             std::size_t horizon, double delta, Rng& rng, std::size_t class_label = 1);

/// Average squared prediction error of the best member of `cls`.
/// Throws UndefinedStatistic on an empty dataset.
double bandit_test_statistic(std::span<const HypothesisFunction> cls, const BanditDataset& data);

/// Adaptive bandit learning over the instance's nested family. Epoch 1 runs
/// on F_M; later epochs pick the smallest class passing the threshold test on
/// all past data and restart the base learner on it.
RunTrace abl_run(const BanditInstance& instance, std::size_t total_rounds, double delta, double slack, Rng& rng);

}  // namespace modsel
