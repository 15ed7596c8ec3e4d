#pragma once

#include <stdexcept>
#include <string>

namespace modsel {

// Malformed configuration, family structure, or instance document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rejection sampler exhausted its attempt budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Test statistic requested before any data exists.
class UndefinedStatistic : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace modsel
