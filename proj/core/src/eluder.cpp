#include "modsel/eluder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "modsel/planning.hpp"

namespace modsel {
namespace {

// Sets of admissible scales are tracked in squared space (c = eps'^2), where
// a point with pair-difference d and prefix sum S is admissible for
// c in [max(eps^2, S), d^2). Every comparison is then exact arithmetic on the
// same doubles the replay check uses.
using Interval = std::pair<double, double>;  // [lo, hi)
using IntervalSet = std::vector<Interval>;

constexpr double kInf = std::numeric_limits<double>::infinity();

IntervalSet normalize(IntervalSet set) {
  std::sort(set.begin(), set.end());
  IntervalSet out;
  for (const auto& iv : set) {
    if (!(iv.first < iv.second)) continue;
    if (!out.empty() && iv.first <= out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second) ++i; else ++j;
  }
  return out;
}

IntervalSet subtract(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  std::size_t j = 0;
  for (auto [lo, hi] : a) {
    while (j < b.size() && b[j].second <= lo) ++j;
    std::size_t k = j;
    while (k < b.size() && b[k].first < hi) {
      if (b[k].first > lo) out.emplace_back(lo, b[k].first);
      lo = std::max(lo, b[k].second);
      if (lo >= hi) break;
      ++k;
    }
    if (lo < hi) out.emplace_back(lo, hi);
  }
  return out;
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet all = a;
  all.insert(all.end(), b.begin(), b.end());
  return normalize(std::move(all));
}

double measure(const IntervalSet& set) {
  double total = 0.0;
  for (const auto& [lo, hi] : set) total += hi - lo;
  return total;
}

// Pointwise differences f1 - f2 for ordered pairs of distinct functions.
struct PairTable {
  std::vector<std::vector<double>> diffs;

  explicit PairTable(const TabularClass& cls) {
    for (std::size_t i = 0; i < cls.functions.size(); ++i) {
      for (std::size_t j = 0; j < cls.functions.size(); ++j) {
        if (i == j) continue;
        std::vector<double> d(cls.domain_size);
        bool any_positive = false;
        for (std::size_t x = 0; x < cls.domain_size; ++x) {
          d[x] = cls.functions[i][x] - cls.functions[j][x];
          any_positive = any_positive || d[x] > 0.0;
        }
        if (any_positive) diffs.push_back(std::move(d));
      }
    }
  }
};

IntervalSet admissible_scales(const PairTable& pairs, const std::vector<double>& sums, std::size_t x, double eps2) {
  IntervalSet set;
  for (std::size_t p = 0; p < pairs.diffs.size(); ++p) {
    const double d = pairs.diffs[p][x];
    if (!(d > 0.0)) continue;
    const double lo = std::max(eps2, sums[p]);
    const double hi = d * d;
    if (lo < hi) set.emplace_back(lo, hi);
  }
  return normalize(std::move(set));
}

double representative_scale(const IntervalSet& set, double eps2) {
  if (set.empty()) return std::sqrt(eps2);
  const auto [lo, hi] = set.front();
  return std::sqrt(std::isinf(hi) ? lo : lo + 0.5 * (hi - lo));
}

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const PairTable& pairs, std::vector<std::size_t> points, double eps2)
      : pairs_(pairs), points_(std::move(points)), eps2_(eps2), sums_(pairs.diffs.size(), 0.0) {}

  void run() {
    best_scale_ = std::sqrt(eps2_);
    descend(0, {{eps2_, kInf}});
  }

  std::size_t best() const { return best_witness_.size(); }
  const std::vector<std::size_t>& witness() const { return best_witness_; }
  double scale() const { return best_scale_; }

 private:
  void descend(std::uint32_t mask, IntervalSet scales) {
    // Scales already explored from this point set cannot yield anything new:
    // the reachable length from a scale depends only on the set of chosen
    // points, not on their order.
    auto& seen = explored_[mask];
    scales = subtract(scales, seen);
    if (scales.empty()) return;
    seen = unite(seen, scales);

    if (sequence_.size() > best_witness_.size() || (sequence_.empty() && best_witness_.empty())) {
      best_witness_ = sequence_;
      best_scale_ = representative_scale(scales, eps2_);
    }
    const std::size_t remaining = points_.size() - sequence_.size();
    if (sequence_.size() + remaining <= best_witness_.size()) return;

    for (std::size_t k = 0; k < points_.size(); ++k) {
      if (mask & (1u << k)) continue;
      const std::size_t x = points_[k];
      auto next = intersect(scales, admissible_scales(pairs_, sums_, x, eps2_));
      if (next.empty()) continue;
      for (std::size_t p = 0; p < sums_.size(); ++p) sums_[p] += pairs_.diffs[p][x] * pairs_.diffs[p][x];
      sequence_.push_back(x);
      descend(mask | (1u << k), std::move(next));
      sequence_.pop_back();
      for (std::size_t p = 0; p < sums_.size(); ++p) sums_[p] -= pairs_.diffs[p][x] * pairs_.diffs[p][x];
      if (best_witness_.size() == points_.size()) return;
    }
  }

  const PairTable& pairs_;
  std::vector<std::size_t> points_;
  double eps2_;
  std::vector<double> sums_;
  std::vector<std::size_t> sequence_;
  std::vector<std::size_t> best_witness_;
  double best_scale_ = 0.0;
  std::unordered_map<std::uint32_t, IntervalSet> explored_;
};

}  // namespace

TabularClass tabulate(std::span<const HypothesisFunction> cls) {
  TabularClass out;
  out.domain_size = cls.empty() ? 0 : cls.front().size();
  for (const auto& f : cls) out.functions.push_back(f.values);
  return out;
}

EluderReport eluder_dimension(const TabularClass& cls, double epsilon, std::span<const std::size_t> domain,
                              EluderOptions options) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("eluder dimension needs epsilon > 0");
  if (cls.functions.empty() || cls.domain_size == 0) throw std::invalid_argument("eluder dimension of an empty class");
  std::vector<std::size_t> candidates;
  if (domain.empty()) {
    for (std::size_t x = 0; x < cls.domain_size; ++x) candidates.push_back(x);
  } else {
    candidates.assign(domain.begin(), domain.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.back() >= cls.domain_size) throw std::out_of_range("domain point outside the class domain");
  }

  const PairTable pairs(cls);
  const double eps2 = epsilon * epsilon;
  // Points where no pair is ever wider than epsilon can never be appended.
  std::erase_if(candidates, [&](std::size_t x) {
    return std::none_of(pairs.diffs.begin(), pairs.diffs.end(), [&](const auto& d) { return d[x] > epsilon; });
  });

  EluderReport report;
  report.epsilon = epsilon;
  report.scale = epsilon;
  report.exact = candidates.size() <= options.exhaustive_cap && candidates.size() <= 31;

  if (report.exact) {
    ExhaustiveSearch search(pairs, candidates, eps2);
    search.run();
    report.witness = search.witness();
    report.scale = search.scale();
  } else {
    // Greedy: append the admissible point that leaves the widest scale set.
    std::vector<double> sums(pairs.diffs.size(), 0.0);
    std::vector<bool> used(candidates.size(), false);
    IntervalSet scales{{eps2, kInf}};
    for (;;) {
      std::size_t pick = candidates.size();
      IntervalSet pick_set;
      double pick_measure = -1.0;
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (used[k]) continue;
        auto next = intersect(scales, admissible_scales(pairs, sums, candidates[k], eps2));
        if (next.empty()) continue;
        const double m = measure(next);
        if (m > pick_measure) {
          pick = k;
          pick_measure = m;
          pick_set = std::move(next);
        }
      }
      if (pick == candidates.size()) break;
      used[pick] = true;
      const std::size_t x = candidates[pick];
      for (std::size_t p = 0; p < sums.size(); ++p) sums[p] += pairs.diffs[p][x] * pairs.diffs[p][x];
      report.witness.push_back(x);
      scales = std::move(pick_set);
    }
    report.scale = representative_scale(scales, eps2);
  }
  report.dimension = report.witness.size();
  return report;
}

std::optional<double> independence_scale(const TabularClass& cls, std::span<const std::size_t> sequence,
                                         double epsilon) {
  const PairTable pairs(cls);
  const double eps2 = epsilon * epsilon;
  // prefix[i][p]: sum of squared differences of pair p before position i.
  std::vector<std::vector<double>> prefix(sequence.size(), std::vector<double>(pairs.diffs.size(), 0.0));
  std::vector<double> candidates{eps2};
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] >= cls.domain_size) return std::nullopt;
    for (std::size_t p = 0; p < pairs.diffs.size(); ++p) {
      if (i > 0) {
        const double d = pairs.diffs[p][sequence[i - 1]];
        prefix[i][p] = prefix[i - 1][p] + d * d;
      }
      if (prefix[i][p] >= eps2) candidates.push_back(prefix[i][p]);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (double c : candidates) {
    bool ok = true;
    for (std::size_t i = 0; i < sequence.size() && ok; ++i) {
      bool found = false;
      for (std::size_t p = 0; p < pairs.diffs.size() && !found; ++p) {
        const double d = pairs.diffs[p][sequence[i]];
        found = d > 0.0 && prefix[i][p] <= c && d * d > c;
      }
      ok = found;
    }
    if (ok) return std::sqrt(c);
  }
  return std::nullopt;
}

bool independent_at_scale(const TabularClass& cls, std::span<const std::size_t> sequence, double scale) {
  const PairTable pairs(cls);
  std::vector<double> sums(pairs.diffs.size(), 0.0);
  for (std::size_t x : sequence) {
    if (x >= cls.domain_size) return false;
    bool found = false;
    for (std::size_t p = 0; p < pairs.diffs.size() && !found; ++p) {
      found = std::sqrt(sums[p]) <= scale && pairs.diffs[p][x] > scale;
    }
    if (!found) return false;
    for (std::size_t p = 0; p < sums.size(); ++p) sums[p] += pairs.diffs[p][x] * pairs.diffs[p][x];
  }
  return true;
}

TabularClass induced_value_class(std::span<const TransitionKernel> kernels,
                                 std::span<const std::vector<double>> value_bank) {
  if (kernels.empty() || value_bank.empty()) throw std::invalid_argument("induced class needs kernels and values");
  const std::size_t S = kernels.front().n_states();
  const std::size_t A = kernels.front().n_actions();
  TabularClass out;
  out.domain_size = value_bank.size() * S * A;
  for (const auto& kernel : kernels) {
    std::vector<double> row;
    row.reserve(out.domain_size);
    for (const auto& values : value_bank) {
      const auto backup = apply_kernel(kernel, values);
      row.insert(row.end(), backup.begin(), backup.end());
    }
    const bool duplicate = std::any_of(out.functions.begin(), out.functions.end(), [&](const auto& g) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (std::abs(row[i] - g[i]) > kEqualityTolerance) return false;
      }
      return true;
    });
    if (!duplicate) out.functions.push_back(std::move(row));
  }
  return out;
}

}  // namespace modsel
