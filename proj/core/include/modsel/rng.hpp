#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace modsel {

/// Seeded generator shared by environments, generators and the harness.
///
/// Wraps std::mt19937_64 and converts raw draws with fixed arithmetic so that
/// streams are bit-identical across standard library implementations (the
/// std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  /// Sample an index from nonnegative weights summing to (about) one.
  std::size_t categorical(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = i;
      cum += probs[i];
      if (u < cum) return i;
    }
    return last_positive;
  }

  std::uint64_t next_raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Per-run stream seed: root seed XOR run index.
inline std::uint64_t derive_seed(std::uint64_t root_seed, std::uint64_t run_index) {
  return root_seed ^ run_index;
}

}  // namespace modsel
