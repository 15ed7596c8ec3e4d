#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "modsel/environments.hpp"

namespace modsel {

struct BanditGenConfig {
  std::size_t n_actions = 10;
  std::size_t n_classes = 3;  // M
  std::size_t true_index = 2;  // m*
  double separation = 1.0;  // Δ
  double locality = 0.05;   // η
  double sigma = 0.1;
  /// Cumulative class sizes |F_1| <= ... <= |F_M|.
  std::vector<std::size_t> class_sizes{4, 8, 32};
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1000;
};

struct MdpGenConfig {
  std::size_t n_states = 4;
  std::size_t n_actions = 2;
  std::size_t horizon = 3;
  std::size_t n_classes = 3;
  std::size_t true_index = 2;
  double separation = 1.0;
  double locality = 0.05;
  std::vector<std::size_t> class_sizes{3, 6, 12};
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1000;
  /// Value bank used to gate separability.
  ValueBankOptions bank{};
};

/// Rejection sampler: draws a candidate family around a random f* and keeps
/// it once verify_nesting and verify_separability_bandit both pass.
///
/// f* puts value 0 on two random actions (the guaranteed near pair) and
/// distinct grid values, 2η apart and at most 1-2η, everywhere else. Members
/// of classes below m* sit at least Δ on that pair and at least 0.5 away from
/// f* elsewhere.
/// Throws ConfigError on infeasible settings, GenerationError when the
/// attempt budget runs out.
BanditInstance gen_bandit_instance(const BanditGenConfig& config);

/// Same scheme for episodic MDPs. States [0, ceil(S/2)) are "good" (one
/// action with reward 1 each), the rest have reward 0 and P* never leaves them.
/// Kernels below m* swap the two regions. The start state is 0.
MdpInstance gen_mdp_instance(const MdpGenConfig& config);

}  // namespace modsel
