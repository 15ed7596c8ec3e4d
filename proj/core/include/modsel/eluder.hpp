#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "modsel/hypothesis.hpp"

namespace modsel {

/// Finite function class over the indexed domain {0, ..., domain_size-1}.
struct TabularClass {
  std::size_t domain_size = 0;
  std::vector<std::vector<double>> functions;
};

TabularClass tabulate(std::span<const HypothesisFunction> cls);

struct EluderOptions {
  /// Domains up to this size are searched exhaustively.
  std::size_t exhaustive_cap = 12;
};

struct EluderReport {
  double epsilon = 0.0;
  std::size_t dimension = 0;
  std::vector<std::size_t> witness;
  bool exact = true;
  /// A scale eps' >= epsilon at which every witness point is independent.
  double scale = 0.0;
};

/// Longest sequence of domain points, each eps'-independent of its
/// predecessors for a common eps' >= epsilon. The first point must also
/// satisfy the width condition, so a singleton class has dimension 0.
///
/// `domain` restricts the candidate points (empty = whole domain).
EluderReport eluder_dimension(const TabularClass& cls, double epsilon, std::span<const std::size_t> domain = {},
                              EluderOptions options = {});

/// Replay check: the smallest eps' >= epsilon at which `sequence` is an
/// independent sequence, or nullopt if there is none.
std::optional<double> independence_scale(const TabularClass& cls, std::span<const std::size_t> sequence,
                                         double epsilon);

/// Checks every point of `sequence` at the fixed scale `scale`.
bool independent_at_scale(const TabularClass& cls, std::span<const std::size_t> sequence, double scale);

/// The class {(s,a,V) -> (PV)(s,a)} restricted to V in `value_bank`, with
/// extensionally equal functions merged. Domain index is (v*S + s)*A + a.
TabularClass induced_value_class(std::span<const TransitionKernel> kernels,
                                 std::span<const std::vector<double>> value_bank);

}  // namespace modsel
