#pragma once

// Reference computations written without the library's algorithms. They are
// deliberately slow: full enumeration, no pruning, no shared helpers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "modsel/hypothesis.hpp"
#include "modsel/planning.hpp"
#include "modsel/rng.hpp"

namespace oracle {

/// V^pi_1(s) for the policy encoded in base |A| by `code`, digit (h-1)*S + s.
inline std::vector<double> policy_value(const modsel::TransitionKernel& p, const modsel::RewardTable& r,
                                        std::size_t horizon, std::size_t code) {
  const std::size_t S = p.n_states();
  const std::size_t A = p.n_actions();
  std::vector<std::size_t> act(horizon * S);
  for (auto& a : act) {
    a = code % A;
    code /= A;
  }
  std::vector<double> next(S, 0.0);
  for (std::size_t h = horizon; h >= 1; --h) {
    std::vector<double> cur(S);
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t a = act[(h - 1) * S + s];
      double v = r.values[s * A + a];
      for (std::size_t t = 0; t < S; ++t) v += p.prob(s, a, t) * next[t];
      cur[s] = v;
    }
    next = cur;
  }
  return next;
}

/// max over every nonstationary deterministic policy of V^pi_1(s), per state.
inline std::vector<double> best_policy_value(const modsel::TransitionKernel& p, const modsel::RewardTable& r,
                                             std::size_t horizon) {
  const std::size_t S = p.n_states();
  std::size_t n_policies = 1;
  for (std::size_t i = 0; i < horizon * S; ++i) n_policies *= p.n_actions();
  std::vector<double> best(S, -1.0);
  for (std::size_t code = 0; code < n_policies; ++code) {
    const auto v = policy_value(p, r, horizon, code);
    for (std::size_t s = 0; s < S; ++s) best[s] = std::max(best[s], v[s]);
  }
  return best;
}

/// Whether `seq` is an independent sequence for one common scale c = eps'^2
/// with c >= eps^2: each point needs an ordered pair (f,g) whose squared
/// distance on the prefix is <= c and whose gap at the point exceeds sqrt(c).
inline bool is_independent(const std::vector<std::vector<double>>& fns, const std::vector<std::size_t>& seq,
                           double eps) {
  const double floor = eps * eps;
  // Feasible c form a union of half-open intervals whose left ends are eps^2
  // or a prefix sum, so testing those values is enough.
  std::vector<double> trial{floor};
  for (std::size_t f = 0; f < fns.size(); ++f) {
    for (std::size_t g = 0; g < fns.size(); ++g) {
      double sum = 0.0;
      for (std::size_t x : seq) {
        if (sum >= floor) trial.push_back(sum);
        const double d = fns[f][x] - fns[g][x];
        sum += d * d;
      }
    }
  }
  for (double c : trial) {
    bool all = true;
    for (std::size_t i = 0; i < seq.size() && all; ++i) {
      bool any = false;
      for (std::size_t f = 0; f < fns.size() && !any; ++f) {
        for (std::size_t g = 0; g < fns.size() && !any; ++g) {
          double sum = 0.0;
          for (std::size_t j = 0; j < i; ++j) {
            const double d = fns[f][seq[j]] - fns[g][seq[j]];
            sum += d * d;
          }
          const double gap = fns[f][seq[i]] - fns[g][seq[i]];
          any = sum <= c && gap > 0.0 && gap * gap > c;
        }
      }
      all = any;
    }
    if (all) return true;
  }
  return false;
}

namespace detail {
inline void extend(const std::vector<std::vector<double>>& fns, std::size_t domain, double eps,
                   std::vector<std::size_t>& seq, std::vector<bool>& used, std::size_t& best) {
  if (is_independent(fns, seq, eps)) {
    best = std::max(best, seq.size());
  } else {
    return;
  }
  for (std::size_t x = 0; x < domain; ++x) {
    if (used[x]) continue;
    used[x] = true;
    seq.push_back(x);
    extend(fns, domain, eps, seq, used, best);
    seq.pop_back();
    used[x] = false;
  }
}
}  // namespace detail

/// Length of the longest independent sequence of distinct domain points.
/// Independence is prefix-closed, so a depth-first walk over every ordering
/// visits them all.
inline std::size_t eluder_dimension(const std::vector<std::vector<double>>& fns, std::size_t domain, double eps) {
  std::vector<std::size_t> seq;
  std::vector<bool> used(domain, false);
  std::size_t best = 0;
  detail::extend(fns, domain, eps, seq, used, best);
  return best;
}

/// Kernel with rows drawn from normalized uniform weights.
inline modsel::TransitionKernel random_kernel(std::size_t S, std::size_t A, modsel::Rng& rng) {
  std::vector<double> probs(S * A * S);
  for (std::size_t row = 0; row < S * A; ++row) {
    double total = 0.0;
    for (std::size_t t = 0; t < S; ++t) total += probs[row * S + t] = rng.uniform();
    for (std::size_t t = 0; t < S; ++t) probs[row * S + t] /= total;
  }
  return {S, A, std::move(probs)};
}

inline modsel::RewardTable random_reward(std::size_t S, std::size_t A, modsel::Rng& rng) {
  modsel::RewardTable r{S, A, std::vector<double>(S * A)};
  for (auto& v : r.values) v = rng.uniform();
  return r;
}

}  // namespace oracle
