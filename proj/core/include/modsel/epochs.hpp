#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "modsel/errors.hpp"

namespace modsel {

/// Epoch i covers rounds (or episodes) start+1 .. start+length.
struct Epoch {
  std::size_t index = 1;
  std::size_t start = 0;   // τ_{i-1} = 2^i - 2 before truncation
  std::size_t length = 0;  // min(2^i, total - start)
  double delta = 1.0;      // δ / 2^i
};

/// Doubling schedule t_i = 2^i, truncated so that the lengths sum to `total`.
inline std::vector<Epoch> epoch_schedule(std::size_t total, double delta) {
  if (total < 1) throw ConfigError("horizon must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0,1]");
  std::vector<Epoch> out;
  std::size_t start = 0;
  for (std::size_t i = 1; start < total; ++i) {
    const std::size_t nominal = std::size_t{1} << i;
    const std::size_t length = std::min(nominal, total - start);
    out.push_back({i, start, length, std::ldexp(delta, -static_cast<int>(i))});
    start += length;
  }
  return out;
}

/// Statistics and choice made at the start of one epoch. Epoch 1 has no
/// data, so `statistics` is empty and `gamma` is NaN.
struct EpochRecord {
  Epoch epoch;
  std::vector<double> statistics;  // T_1 .. T_M
  double gamma = std::numeric_limits<double>::quiet_NaN();
  std::size_t chosen = 1;
};

/// Smallest 1-based m with stats[m] <= stats[M] + slack.
struct Selection {
  std::size_t index = 1;
  double gamma = 0.0;
};

inline Selection select_model(const std::vector<double>& stats, double slack) {
  if (stats.empty()) throw ConfigError("model selection needs at least one statistic");
  if (!(slack >= 0.0)) throw ConfigError("slack must be nonnegative");
  const double gamma = stats.back() + slack;
  for (std::size_t m = 0; m < stats.size(); ++m) {
    if (stats[m] <= gamma) return {m + 1, gamma};
  }
  return {stats.size(), gamma};
}

}  // namespace modsel
