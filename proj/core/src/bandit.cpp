#include "modsel/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modsel {

BanditDataset::BanditDataset(std::size_t n_actions) : count_(n_actions, 0), mean_(n_actions, 0.0), m2_(n_actions, 0.0) {}

void BanditDataset::append(std::size_t action, double reward) {
  if (action >= count_.size()) throw std::out_of_range("action index out of range");
  actions_.push_back(action);
  rewards_.push_back(reward);
  // Welford update keeps the loss of an exact fit at exactly zero.
  const double old_mean = mean_[action];
  count_[action] += 1;
  mean_[action] += (reward - old_mean) / static_cast<double>(count_[action]);
  m2_[action] += (reward - old_mean) * (reward - mean_[action]);
}

double BanditDataset::loss(const HypothesisFunction& f) const {
  double acc = 0.0;
  for (std::size_t x = 0; x < count_.size(); ++x) {
    if (count_[x] == 0) continue;
    const double d = f(x) - mean_[x];
    acc += static_cast<double>(count_[x]) * d * d + m2_[x];
  }
  return acc;
}

double BanditDataset::discrepancy(const HypothesisFunction& f, const HypothesisFunction& g) const {
  double acc = 0.0;
  for (std::size_t x = 0; x < count_.size(); ++x) {
    if (count_[x] == 0) continue;
    const double d = f(x) - g(x);
    acc += static_cast<double>(count_[x]) * d * d;
  }
  return acc;
}

FitResult least_squares_fit(std::span<const HypothesisFunction> cls, const BanditDataset& data) {
  if (cls.empty()) throw ConfigError("least squares over an empty class");
  FitResult best{0, data.loss(cls[0])};
  for (std::size_t i = 1; i < cls.size(); ++i) {
    const double loss = data.loss(cls[i]);
    if (loss < best.loss) best = {i, loss};
  }
  return best;
}

double beta_bandit(double class_entropy, std::size_t t, double delta, double sigma) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("delta must lie in (0,1]");
  if (t < 1) throw std::domain_error("round index must be at least 1");
  if (!(sigma >= 0.0)) throw std::domain_error("sigma must be nonnegative");
  const double s2 = sigma * sigma;
  const double td = static_cast<double>(t);
  const double first = 8.0 * s2 * (std::log(2.0) + class_entropy + std::log(1.0 / delta));
  const double second = 2.0 * (8.0 + std::sqrt(8.0 * s2 * std::log(8.0 * td * (td + 1.0) / delta)));
  return first + second;
}

ConfidenceState build_confidence_set(std::span<const HypothesisFunction> cls, const BanditDataset& data, double beta) {
  ConfidenceState conf;
  conf.estimate = least_squares_fit(cls, data).index;
  conf.width = beta;
  const auto& fhat = cls[conf.estimate];
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (i == conf.estimate || data.discrepancy(cls[i], fhat) <= beta) conf.members.push_back(i);
  }
  return conf;
}

OptimisticChoice optimistic_action(std::span<const HypothesisFunction> cls, const ConfidenceState& conf) {
  if (conf.members.empty()) throw std::logic_error("optimistic action over an empty confidence set");
  const std::size_t n = cls[conf.members.front()].size();
  OptimisticChoice best{0, -std::numeric_limits<double>::infinity()};
  for (std::size_t x = 0; x < n; ++x) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i : conf.members) top = std::max(top, cls[i](x));
    if (top > best.ucb) best = {x, top};
  }
  return best;
}

BanditLearner::BanditLearner(std::span<const HypothesisFunction> cls, std::size_t n_actions, double delta, double sigma,
                             std::optional<double> entropy_override)
    : cls_(cls),
      data_(n_actions),
      delta_(delta),
      sigma_(sigma),
      entropy_(metric_entropy(cls.size(), entropy_override)) {}

OptimisticChoice BanditLearner::choose() {
  const double beta = beta_bandit(entropy_, round(), delta_, sigma_);
  conf_ = build_confidence_set(cls_, data_, beta);
  return optimistic_action(cls_, conf_);
}

void BanditLearner::observe(std::size_t action, double reward) { data_.append(action, reward); }

bool BanditLearner::covers(std::size_t index) const {
  return std::find(conf_.members.begin(), conf_.members.end(), index) != conf_.members.end();
}

bool RunTrace::covered() const {
  return std::all_of(rounds.begin(), rounds.end(), [](const RoundRecord& r) { return r.truth_covered; });
}

namespace {

/// Runs `length` rounds of a fresh base learner and appends them to `trace`.
/// Every observation also goes into `history` when given.
void run_base(std::span<const HypothesisFunction> cls, const BanditInstance& instance, std::size_t length,
              double delta, std::size_t epoch, std::size_t class_label, Rng& rng, RunTrace& trace,
              BanditDataset* history) {
  BanditLearner learner(cls, instance.n_actions(), delta, instance.sigma());
  const auto truth_index = find_member(cls, instance.truth());
  double cum = trace.final_regret();
  for (std::size_t step = 0; step < length; ++step) {
    const auto choice = learner.choose();
    const double reward = sample_reward(instance, choice.action, rng);
    learner.observe(choice.action, reward);
    if (history) history->append(choice.action, reward);
    const double regret = instance.best_value() - instance.truth()(choice.action);
    cum += regret;
    trace.rounds.push_back({trace.rounds.size() + 1, epoch, class_label, choice.action, reward, regret, cum,
                            truth_index && learner.covers(*truth_index)});
  }
}

}  // namespace

RunTrace bandit_learning_run(std::span<const HypothesisFunction> cls, const BanditInstance& instance,
                             std::size_t horizon, double delta, Rng& rng, std::size_t class_label) {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0,1]");
  RunTrace trace;
  trace.rounds.reserve(horizon);
  EpochRecord record;
  record.epoch = {1, 0, horizon, delta};
  record.chosen = class_label;
  trace.epochs.push_back(record);
  run_base(cls, instance, horizon, delta, 1, class_label, rng, trace, nullptr);
  return trace;
}

double bandit_test_statistic(std::span<const HypothesisFunction> cls, const BanditDataset& data) {
  if (data.empty()) throw UndefinedStatistic("test statistic needs at least one observation");
  return least_squares_fit(cls, data).loss / static_cast<double>(data.size());
}

RunTrace abl_run(const BanditInstance& instance, std::size_t total_rounds, double delta, double slack, Rng& rng) {
  if (total_rounds < 2) throw ConfigError("ABL needs at least two rounds");
  const auto& family = instance.family();
  const std::size_t M = family.size();
  RunTrace trace;
  trace.rounds.reserve(total_rounds);
  BanditDataset history(instance.n_actions());
  for (const Epoch& epoch : epoch_schedule(total_rounds, delta)) {
    EpochRecord record;
    record.epoch = epoch;
    if (epoch.index == 1) {
      record.chosen = M;
    } else {
      for (std::size_t m = 1; m <= M; ++m) record.statistics.push_back(bandit_test_statistic(family.at(m), history));
      const auto selection = select_model(record.statistics, slack);
      record.chosen = selection.index;
      record.gamma = selection.gamma;
    }
    trace.epochs.push_back(record);
    run_base(family.at(record.chosen), instance, epoch.length, epoch.delta, epoch.index, record.chosen, rng, trace,
             &history);
  }
  return trace;
}

}  // namespace modsel
