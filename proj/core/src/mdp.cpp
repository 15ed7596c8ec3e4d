#include "modsel/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modsel {

std::size_t VtrDataset::begin_episode(const ValueTables& tables) {
  if (tables.n_states() != n_states_ || tables.horizon() != horizon_) {
    throw std::invalid_argument("value tables do not match the dataset shape");
  }
  values_.push_back(tables.all_values());
  return values_.size() - 1;
}

void VtrDataset::append(std::size_t step, std::size_t state, std::size_t action, std::size_t next_state) {
  if (values_.empty()) throw std::logic_error("append before begin_episode");
  if (step < 1 || step > horizon_) throw std::out_of_range("step outside [1, H]");
  records_.push_back({values_.size() - 1, step, state, action, next_state});
}

double predicted_value(const TransitionKernel& kernel, const VtrDataset& data, const Transition& t) {
  const auto v = data.values(t.episode, t.step + 1);
  const auto row = kernel.row(t.state, t.action);
  double acc = 0.0;
  for (std::size_t s = 0; s < row.size(); ++s) acc += row[s] * v[s];
  return acc;
}

double vtr_loss(const TransitionKernel& kernel, const VtrDataset& data) {
  double acc = 0.0;
  for (const auto& t : data.records()) {
    const double r = data.target(t) - predicted_value(kernel, data, t);
    acc += r * r;
  }
  return acc;
}

double vtr_discrepancy(const TransitionKernel& p, const TransitionKernel& q, const VtrDataset& data) {
  double acc = 0.0;
  for (const auto& t : data.records()) {
    const double d = predicted_value(p, data, t) - predicted_value(q, data, t);
    acc += d * d;
  }
  return acc;
}

KernelFit vtr_fit(std::span<const TransitionKernel> cls, const VtrDataset& data) {
  if (cls.empty()) throw ConfigError("regression over an empty kernel class");
  KernelFit best{0, vtr_loss(cls[0], data)};
  for (std::size_t i = 1; i < cls.size(); ++i) {
    const double loss = vtr_loss(cls[i], data);
    if (loss < best.loss) best = {i, loss};
  }
  return best;
}

double beta_mdp(double class_entropy, std::size_t k, std::size_t horizon, double delta, BetaForm form) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("delta must lie in (0,1]");
  if (k < 1) throw std::domain_error("episode index must be at least 1");
  const double H = static_cast<double>(horizon);
  if (form == BetaForm::finite) return 8.0 * H * H * (class_entropy + std::log(1.0 / delta));
  const double kh = static_cast<double>(k) * H;
  return 8.0 * H * H * (std::log(2.0) + class_entropy + std::log(1.0 / delta)) +
         4.0 * H * H * (2.0 + std::sqrt(2.0 * std::log(4.0 * kh * (kh + 1.0) / delta)));
}

std::vector<std::size_t> mdp_confidence_set(std::span<const TransitionKernel> cls, std::size_t estimate,
                                            const VtrDataset& data, double beta) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (i == estimate || vtr_discrepancy(cls[i], cls[estimate], data) <= beta) members.push_back(i);
  }
  return members;
}

OptimisticModel optimistic_model(std::span<const TransitionKernel> cls, std::span<const std::size_t> members,
                                 const RewardTable& reward, std::size_t horizon, std::size_t initial_state) {
  if (members.empty()) throw std::logic_error("optimistic planning over an empty confidence set");
  OptimisticModel best{members.front(), 0.0};
  bool first = true;
  for (std::size_t i : members) {
    const double value = value_iteration(cls[i], reward, horizon).v(1, initial_state);
    if (first || value > best.value) best = {i, value};
    first = false;
  }
  return best;
}

VtrLearner::VtrLearner(std::span<const TransitionKernel> cls, const MdpInstance& instance, double delta,
                       VtrOptions options)
    : cls_(cls),
      initial_state_(instance.initial_state()),
      delta_(delta),
      options_(options),
      entropy_(metric_entropy(cls.size(), options.entropy_override)),
      data_(instance.n_states(), instance.horizon()),
      loss_(cls.size(), 0.0),
      pair_(cls.size() * cls.size(), 0.0) {
  tables_.reserve(cls.size());
  for (const auto& kernel : cls) {
    tables_.push_back(value_iteration(kernel, instance.reward(), instance.horizon()));
    policies_.push_back(greedy_policy(tables_.back()));
    true_values_.push_back(
        policy_evaluation(policies_.back(), instance.truth(), instance.reward(), instance.horizon())[initial_state_]);
  }
}

OptimisticModel VtrLearner::plan() {
  const std::size_t n = cls_.size();
  members_.clear();
  if (data_.episodes() == 0) {
    for (std::size_t i = 0; i < n; ++i) members_.push_back(i);
  } else {
    std::size_t estimate = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (loss_[i] < loss_[estimate]) estimate = i;
    }
    const double beta = beta_mdp(entropy_, data_.episodes(), data_.horizon(), delta_, options_.form);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == estimate || pair_[i * n + estimate] <= beta) members_.push_back(i);
    }
  }
  OptimisticModel best{members_.front(), tables_[members_.front()].v(1, initial_state_)};
  for (std::size_t i : members_) {
    const double value = tables_[i].v(1, initial_state_);
    if (value > best.value) best = {i, value};
  }
  return best;
}

void VtrLearner::observe_episode(std::size_t planned, std::span<const Transition> steps) {
  const std::size_t n = cls_.size();
  data_.begin_episode(tables_[planned]);
  std::vector<double> pred(n);
  for (const auto& step : steps) {
    data_.append(step.step, step.state, step.action, step.next_state);
    const Transition& t = data_.records().back();
    const double target = data_.target(t);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = predicted_value(cls_[i], data_, t);
      const double r = target - pred[i];
      loss_[i] += r * r;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = pred[i] - pred[j];
        pair_[i * n + j] += d * d;
      }
    }
  }
}

bool VtrLearner::covers(std::size_t member) const {
  return std::find(members_.begin(), members_.end(), member) != members_.end();
}

bool MdpRunTrace::covered() const {
  return std::all_of(episodes.begin(), episodes.end(), [](const EpisodeRecord& e) { return e.truth_covered; });
}

namespace {

struct GlobalHistory {
  VtrDataset data;
  std::span<const TransitionKernel> largest;
  std::vector<double> loss;  // per member of the largest class
};

void run_base(std::span<const TransitionKernel> cls, const MdpInstance& instance, std::size_t length, double delta,
              std::size_t epoch, std::size_t class_label, Rng& rng, const VtrOptions& options, MdpRunTrace& trace,
              GlobalHistory* history) {
  VtrLearner learner(cls, instance, delta, options);
  const auto truth_index = find_member(cls, instance.truth());
  const std::size_t H = instance.horizon();
  const double optimal = instance.optimal_value();
  double cum = trace.final_regret();
  std::vector<Transition> steps(H);
  for (std::size_t k = 0; k < length; ++k) {
    const auto planned = learner.plan();
    const bool covered = truth_index && learner.covers(*truth_index);
    const auto& policy = learner.policy(planned.index);
    std::size_t state = instance.initial_state();
    for (std::size_t h = 1; h <= H; ++h) {
      const std::size_t action = policy(h, state);
      const std::size_t next = mdp_step(instance, state, action, rng);
      steps[h - 1] = {0, h, state, action, next};
      state = next;
    }
    learner.observe_episode(planned.index, steps);
    if (history) {
      history->data.begin_episode(learner.tables(planned.index));
      for (const auto& s : steps) {
        history->data.append(s.step, s.state, s.action, s.next_state);
        const Transition& t = history->data.records().back();
        const double target = history->data.target(t);
        for (std::size_t i = 0; i < history->largest.size(); ++i) {
          const double r = target - predicted_value(history->largest[i], history->data, t);
          history->loss[i] += r * r;
        }
      }
    }
    const double value = learner.true_value(planned.index);
    const double regret = std::max(0.0, optimal - value);
    cum += regret;
    trace.episodes.push_back({trace.episodes.size() + 1, epoch, class_label, value, optimal, regret, cum, covered});
  }
}

}  // namespace

MdpRunTrace ucrl_vtr_run(std::span<const TransitionKernel> cls, const MdpInstance& instance, std::size_t episodes,
                         double delta, Rng& rng, std::size_t class_label, VtrOptions options) {
  if (episodes < 1) throw ConfigError("need at least one episode");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0,1]");
  MdpRunTrace trace;
  trace.episodes.reserve(episodes);
  EpochRecord record;
  record.epoch = {1, 0, episodes, delta};
  record.chosen = class_label;
  trace.epochs.push_back(record);
  run_base(cls, instance, episodes, delta, 1, class_label, rng, options, trace, nullptr);
  return trace;
}

double mdp_test_statistic(std::span<const TransitionKernel> cls, const VtrDataset& data, std::size_t tau) {
  if (tau == 0) throw UndefinedStatistic("test statistic needs at least one past episode");
  return vtr_fit(cls, data).loss / (static_cast<double>(tau) * static_cast<double>(data.horizon()));
}

MdpRunTrace arl_run(const MdpInstance& instance, std::size_t total_episodes, double delta, double slack, Rng& rng,
                    VtrOptions options) {
  if (total_episodes < 2) throw ConfigError("ARL needs at least two episodes");
  const auto& family = instance.family();
  const std::size_t M = family.size();
  std::vector<std::vector<std::size_t>> index_of(M);
  for (std::size_t m = 1; m <= M; ++m) index_of[m - 1] = family.member_indices(m);

  GlobalHistory history{VtrDataset(instance.n_states(), instance.horizon()), family.largest(),
                        std::vector<double>(family.largest().size(), 0.0)};
  MdpRunTrace trace;
  trace.episodes.reserve(total_episodes);
  for (const Epoch& epoch : epoch_schedule(total_episodes, delta)) {
    EpochRecord record;
    record.epoch = epoch;
    if (epoch.index == 1) {
      record.chosen = M;
    } else {
      const double scale = static_cast<double>(epoch.start) * static_cast<double>(instance.horizon());
      for (std::size_t m = 1; m <= M; ++m) {
        double best = history.loss[index_of[m - 1].front()];
        for (std::size_t i : index_of[m - 1]) best = std::min(best, history.loss[i]);
        record.statistics.push_back(best / scale);
      }
      const auto selection = select_model(record.statistics, slack);
      record.chosen = selection.index;
      record.gamma = selection.gamma;
    }
    trace.epochs.push_back(record);
    run_base(family.at(record.chosen), instance, epoch.length, epoch.delta, epoch.index, record.chosen, rng, options,
             trace, &history);
  }
  return trace;
}

}  // namespace modsel
