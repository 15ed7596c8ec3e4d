#include "modsel/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace modsel {
namespace {

constexpr std::size_t kDistinctTries = 200;

void check_layout(std::size_t n_classes, std::size_t true_index, const std::vector<std::size_t>& sizes, double separation,
                  double locality) {
  if (n_classes < 1) throw ConfigError("need at least one class");
  if (true_index < 1 || true_index > n_classes) throw ConfigError("true class index must lie in [1, M]");
  if (sizes.size() != n_classes) throw ConfigError("class_sizes must have M entries");
  if (sizes.front() < 1) throw ConfigError("class sizes must be positive");
  for (std::size_t m = 1; m < sizes.size(); ++m) {
    if (sizes[m] < sizes[m - 1]) throw ConfigError("class sizes must be nondecreasing");
  }
  if (true_index >= 2 && sizes[true_index - 1] <= sizes[true_index - 2]) {
    throw ConfigError("class m* must be strictly larger than class m*-1");
  }
  if (!(separation > 0.0) || !(locality > 0.0)) throw ConfigError("separation and locality must be positive");
}

double round_down(double x, double step) { return std::floor(x / step + 1e-9) * step; }
double round_up(double x, double step) { return std::ceil(x / step - 1e-9) * step; }

/// Random split of `mass` over `targets`, written into `row`.
void spread(std::vector<double>& row, std::size_t offset, const std::vector<std::size_t>& targets, double mass,
            Rng& rng) {
  if (targets.empty() || mass <= 0.0) return;
  std::vector<double> w(targets.size());
  for (auto& x : w) x = 0.05 + rng.uniform();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (std::size_t i = 0; i < targets.size(); ++i) row[offset + targets[i]] += mass * w[i] / total;
}

/// Class m is the first sizes[m-1] entries of the pool.
template <typename Model>
std::vector<std::vector<Model>> cumulative_classes(const std::vector<Model>& pool, const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<Model>> classes;
  for (std::size_t size : sizes) classes.emplace_back(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
  return classes;
}

template <typename Model, typename Draw>
Model draw_distinct(const std::vector<Model>& pool, Draw&& draw) {
  for (std::size_t i = 0; i < kDistinctTries; ++i) {
    Model candidate = draw();
    if (!contains(std::span<const Model>(pool), candidate)) return candidate;
  }
  throw GenerationError("could not draw a distinct class member; the value grid is too coarse for the class sizes");
}

/// The first sizes[m*-2] entries are rivals (non-realizable); f* lands at a
/// random slot of the class-m* block; everything after it is a distractor.
template <typename Model, typename DrawRival, typename DrawDistractor>
std::vector<Model> build_pool(const Model& truth, std::size_t true_index, const std::vector<std::size_t>& sizes,
                              Rng& rng, DrawRival&& rival, DrawDistractor&& distractor) {
  const std::size_t below = true_index >= 2 ? sizes[true_index - 2] : 0;
  const std::size_t block = sizes[true_index - 1] - below;
  const std::size_t truth_slot = below + rng.index(block);
  std::vector<Model> pool;
  pool.reserve(sizes.back());
  for (std::size_t i = 0; i < sizes.back(); ++i) {
    if (i == truth_slot) {
      if (contains(std::span<const Model>(pool), truth)) throw GenerationError("truth duplicated in pool");
      pool.push_back(truth);
      continue;
    }
    // Distractors must also differ from a truth that is placed later.
    std::vector<Model> seen = pool;
    if (i < truth_slot) seen.push_back(truth);
    pool.push_back(i < below ? draw_distinct(seen, rival) : draw_distinct(seen, distractor));
  }
  return pool;
}

}  // namespace

BanditInstance gen_bandit_instance(const BanditGenConfig& config) {
  check_layout(config.n_classes, config.true_index, config.class_sizes, config.separation, config.locality);
  const std::size_t n = config.n_actions;
  if (n < 2) throw ConfigError("bandit generator needs at least two actions");
  if (config.separation < 2.0 * std::sqrt(2.0 * config.locality)) {
    throw ConfigError("infeasible: separation must be at least 2*sqrt(2*locality)");
  }
  if (config.true_index >= 2 && config.separation > 1.0) {
    throw ConfigError("infeasible: separation above 1 cannot hold for values in [0,1]");
  }
  if (!(config.sigma >= 0.0)) throw ConfigError("sigma must be nonnegative");

  Rng rng(config.seed);
  // Non-pair values are k*spacing for k = 1..levels, all within [spacing, 1-spacing].
  double spacing = 2.0 * config.locality;
  auto level_count = [](double step) { return static_cast<std::size_t>(std::floor(1.0 / step + 1e-9)) - 1; };
  if (level_count(spacing) < n - 2) spacing = 1.0 / static_cast<double>(n);
  const std::size_t grid_points = level_count(spacing);

  SeparabilityReport last;
  for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
    // f*: the near pair at 0, distinct grid values elsewhere.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
    std::vector<std::size_t> levels(grid_points);
    std::iota(levels.begin(), levels.end(), 1);
    for (std::size_t i = grid_points; i > 1; --i) std::swap(levels[i - 1], levels[rng.index(i)]);

    HypothesisFunction truth{std::vector<double>(n)};
    std::vector<bool> near(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t x = order[i];
      if (i < 2) {
        truth.values[x] = 0.0;
        near[x] = true;
      } else {
        truth.values[x] = static_cast<double>(levels[i - 2]) * spacing;
      }
    }

    auto rival = [&] {
      HypothesisFunction f{std::vector<double>(n)};
      for (std::size_t x = 0; x < n; ++x) {
        const double star = truth(x);
        if (near[x]) {
          f.values[x] = std::min(1.0, round_up(rng.uniform(config.separation, 1.0), 1e-3));
        } else if (star < 0.5) {
          f.values[x] = std::min(1.0, round_up(rng.uniform(star + 0.5, 1.0), 1e-3));
        } else {
          f.values[x] = std::max(0.0, round_down(rng.uniform(0.0, star - 0.5), 1e-3));
        }
      }
      return f;
    };
    auto distractor = [&] {
      HypothesisFunction f{std::vector<double>(n)};
      for (auto& v : f.values) v = static_cast<double>(rng.index(21)) * 0.05;
      return f;
    };

    FunctionFamily family;
    family.true_index = config.true_index;
    family.separation = config.separation;
    family.locality = config.locality;
    family.classes = cumulative_classes(build_pool(truth, config.true_index, config.class_sizes, rng, rival, distractor),
                                        config.class_sizes);
    if (!verify_nesting(family, truth)) continue;
    last = verify_separability_bandit(family, truth);
    if (!last.holds) continue;
    return BanditInstance(std::move(family), std::move(truth), config.sigma);
  }
  throw GenerationError("bandit generator exhausted " + std::to_string(config.max_attempts) +
                        " attempts; last achieved gap " + std::to_string(last.achieved_gap) + " with " +
                        std::to_string(last.violations.size()) + " violating pairs");
}

MdpInstance gen_mdp_instance(const MdpGenConfig& config) {
  check_layout(config.n_classes, config.true_index, config.class_sizes, config.separation, config.locality);
  const std::size_t S = config.n_states;
  const std::size_t A = config.n_actions;
  const std::size_t H = config.horizon;
  if (S < 2 || A < 1) throw ConfigError("MDP generator needs at least two states and one action");
  if (H < 1) throw ConfigError("horizon must be at least 1");
  if (config.separation < 2.0 * std::sqrt(static_cast<double>(H) * config.locality)) {
    throw ConfigError("infeasible: separation must be at least 2*sqrt(H*locality)");
  }

  Rng rng(config.seed);
  const std::size_t n_good = (S + 1) / 2;
  std::vector<std::size_t> good(n_good);
  std::iota(good.begin(), good.end(), 0);
  std::vector<std::size_t> bad(S - n_good);
  std::iota(bad.begin(), bad.end(), n_good);

  SeparabilityReport last;
  for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
    RewardTable reward{S, A, std::vector<double>(S * A, 0.0)};
    for (std::size_t s : good) {
      const std::size_t best = rng.index(A);
      for (std::size_t a = 0; a < A; ++a) {
        reward.values[s * A + a] = a == best ? 1.0 : 0.5 + 0.05 * static_cast<double>(rng.index(9));
      }
    }

    auto kernel = [&](auto&& fill_row) {
      std::vector<double> probs(S * A * S, 0.0);
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) fill_row(probs, (s * A + a) * S, s);
      }
      return TransitionKernel(S, A, std::move(probs));
    };

    TransitionKernel truth = kernel([&](std::vector<double>& probs, std::size_t offset, std::size_t s) {
      if (s >= n_good || bad.empty()) {
        spread(probs, offset, s >= n_good ? bad : good, 1.0, rng);
        return;
      }
      const double mass = s == 0 ? rng.uniform(0.8, 0.95) : rng.uniform(0.5, 0.85);
      spread(probs, offset, good, mass, rng);
      spread(probs, offset, bad, 1.0 - mass, rng);
    });

    auto rival = [&] {
      return kernel([&](std::vector<double>& probs, std::size_t offset, std::size_t s) {
        spread(probs, offset, s < n_good ? bad : good, 1.0, rng);
      });
    };
    auto distractor = [&] {
      return kernel([&](std::vector<double>& probs, std::size_t offset, std::size_t) {
        if (rng.uniform() < 0.5) {
          const auto& row = truth.data();
          std::copy(row.begin() + static_cast<std::ptrdiff_t>(offset),
                    row.begin() + static_cast<std::ptrdiff_t>(offset + S), probs.begin() + static_cast<std::ptrdiff_t>(offset));
          return;
        }
        const double mass = rng.uniform(0.8, 1.0);
        spread(probs, offset, good, mass, rng);
        spread(probs, offset, bad, 1.0 - mass, rng);
      });
    };

    KernelFamily family;
    family.true_index = config.true_index;
    family.separation = config.separation;
    family.locality = config.locality;
    family.classes = cumulative_classes(build_pool(truth, config.true_index, config.class_sizes, rng, rival, distractor),
                                        config.class_sizes);
    if (!verify_nesting(family, truth)) continue;
    MdpInstance instance(std::move(family), truth, std::move(reward), H, 0);
    const auto bank = value_bank(instance, config.bank);
    last = verify_separability_mdp(instance.family(), instance.truth(), bank);
    if (!last.holds) continue;
    return instance;
  }
  throw GenerationError("MDP generator exhausted " + std::to_string(config.max_attempts) +
                        " attempts; last achieved gap " + std::to_string(last.achieved_gap) + " with " +
                        std::to_string(last.violations.size()) + " violating pairs");
}

}  // namespace modsel
