#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "modsel/environments.hpp"
#include "modsel/epochs.hpp"
#include "modsel/planning.hpp"

namespace modsel {

struct Transition {
  std::size_t episode = 0;  // index into the dataset's value tables
  std::size_t step = 1;     // h in [1, H]
  std::size_t state = 0;
  std::size_t action = 0;
  std::size_t next_state = 0;
};

/// Transitions grouped by episode, each episode carrying the V tables that
/// were used for planning (V_1 .. V_{H+1}).
class VtrDataset {
 public:
  VtrDataset(std::size_t n_states, std::size_t horizon) : n_states_(n_states), horizon_(horizon) {}

  /// Starts an episode planned with `tables`; returns its index.
  std::size_t begin_episode(const ValueTables& tables);
  void append(std::size_t step, std::size_t state, std::size_t action, std::size_t next_state);

  std::size_t n_states() const { return n_states_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t episodes() const { return values_.size(); }
  std::span<const Transition> records() const { return records_; }
  /// V^j_h as a state vector.
  std::span<const double> values(std::size_t episode, std::size_t h) const {
    return {values_[episode].data() + (h - 1) * n_states_, n_states_};
  }
  /// The regression target V^j_{h+1}(s_{h+1}) of a record.
  double target(const Transition& t) const { return values(t.episode, t.step + 1)[t.next_state]; }

 private:
  std::size_t n_states_;
  std::size_t horizon_;
  std::vector<Transition> records_;
  std::vector<std::vector<double>> values_;
};

/// (P V^j_{h+1})(s_h, a_h) for one record.
double predicted_value(const TransitionKernel& kernel, const VtrDataset& data, const Transition& t);

/// L(P) = Σ_j Σ_h (V^j_{h+1}(s') - (P V^j_{h+1})(s,a))^2, summed in record order.
double vtr_loss(const TransitionKernel& kernel, const VtrDataset& data);

/// Σ over records of ((P V)(s,a) - (Q V)(s,a))^2.
double vtr_discrepancy(const TransitionKernel& p, const TransitionKernel& q, const VtrDataset& data);

struct KernelFit {
  std::size_t index = 0;
  double loss = 0.0;
};

KernelFit vtr_fit(std::span<const TransitionKernel> cls, const VtrDataset& data);

enum class BetaForm { finite, covering };

/// finite:   8H²(entropy + ln(1/δ))
/// covering: 8H²(ln 2 + entropy + ln(1/δ)) + 4H²(2 + sqrt(2 ln(4kH(kH+1)/δ)))
double beta_mdp(double class_entropy, std::size_t k, std::size_t horizon, double delta, BetaForm form = BetaForm::finite);

/// Members P with vtr_discrepancy(P, P̂) <= beta; always contains `estimate`.
std::vector<std::size_t> mdp_confidence_set(std::span<const TransitionKernel> cls, std::size_t estimate,
                                            const VtrDataset& data, double beta);

struct OptimisticModel {
  std::size_t index = 0;  // into the class
  double value = 0.0;     // V*_{P,1}(s1)
};

/// argmax over members of V*_{P,1}(s1), lowest index on ties.
OptimisticModel optimistic_model(std::span<const TransitionKernel> cls, std::span<const std::size_t> members,
                                 const RewardTable& reward, std::size_t horizon, std::size_t initial_state);

struct VtrOptions {
  BetaForm form = BetaForm::finite;
  std::optional<double> entropy_override;
};

/// UCRL-VTR on a fixed class. Each member's optimal tables and the true value
/// of its greedy policy are computed once; the confidence set is maintained
/// through incremental pairwise discrepancies.
class VtrLearner {
 public:
  VtrLearner(std::span<const TransitionKernel> cls, const MdpInstance& instance, double delta, VtrOptions options = {});

  /// Plans episode k: B_{k-1} (whole class when k = 1), then the optimistic member.
  OptimisticModel plan();
  const ValueTables& tables(std::size_t member) const { return tables_[member]; }
  const GreedyPolicy& policy(std::size_t member) const { return policies_[member]; }
  /// V^{π_P}_1(s1) under P* for the greedy policy of member P.
  double true_value(std::size_t member) const { return true_values_[member]; }

  /// Records one episode planned with member `planned`.
  void observe_episode(std::size_t planned, std::span<const Transition> steps);

  bool covers(std::size_t member) const;
  const std::vector<std::size_t>& members() const { return members_; }
  const VtrDataset& data() const { return data_; }
  std::size_t episode() const { return data_.episodes() + 1; }

 private:
  std::span<const TransitionKernel> cls_;
  std::size_t initial_state_;
  double delta_;
  VtrOptions options_;
  double entropy_;
  VtrDataset data_;
  std::vector<ValueTables> tables_;
  std::vector<GreedyPolicy> policies_;
  std::vector<double> true_values_;
  std::vector<double> loss_;
  std::vector<double> pair_;  // |cls| x |cls| discrepancy matrix
  std::vector<std::size_t> members_;
};

struct EpisodeRecord {
  std::size_t episode = 0;  // global, 1-based
  std::size_t epoch = 1;
  std::size_t selected_class = 1;
  double episode_value = 0.0;
  double optimal_value = 0.0;
  double instant_regret = 0.0;
  double cum_regret = 0.0;
  bool truth_covered = false;
};

struct MdpRunTrace {
  std::vector<EpisodeRecord> episodes;
  std::vector<EpochRecord> epochs;

  double final_regret() const { return episodes.empty() ? 0.0 : episodes.back().cum_regret; }
  bool covered() const;
};

MdpRunTrace ucrl_vtr_run(std::span<const TransitionKernel> cls, const MdpInstance& instance, std::size_t episodes,
                         double delta, Rng& rng, std::size_t class_label = 1, VtrOptions options = {});

/// vtr_fit loss / (tau * H). Throws UndefinedStatistic when tau = 0.
double mdp_test_statistic(std::span<const TransitionKernel> cls, const VtrDataset& data, std::size_t tau);

/// Adaptive RL: doubling epochs over episodes, class chosen by the threshold
/// test on all past episodes, UCRL-VTR restarted each epoch.
MdpRunTrace arl_run(const MdpInstance& instance, std::size_t total_episodes, double delta, double slack, Rng& rng,
                    VtrOptions options = {});

}  // namespace modsel
