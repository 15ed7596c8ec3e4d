#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "modsel/errors.hpp"

namespace modsel::detail {

using json = nlohmann::json;

inline json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

/// Reads known keys from a JSON object and rejects the rest.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string where) : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  bool has(const char* key) const { return node_.contains(key); }

  const json& child(const char* key) {
    seen_.insert(key);
    return node_.at(key);
  }

  template <typename T>
    requires(std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>)
  void read(const char* key, T& out) {
    read_unsigned(key, out);
  }
  void read(const char* key, double& out) {
    if (!present(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(path(key) + " must be a number");
    out = v.get<double>();
  }
  void read(const char* key, bool& out) {
    if (!present(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + " must be a boolean");
    out = v.get<bool>();
  }
  void read(const char* key, std::string& out) {
    if (!present(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(path(key) + " must be a string");
    out = v.get<std::string>();
  }
  void read(const char* key, std::vector<std::size_t>& out) {
    if (!present(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(path(key) + " must be an array");
    out.clear();
    for (const auto& item : v) {
      if (!item.is_number_unsigned()) throw ConfigError(path(key) + " must hold nonnegative integers");
      out.push_back(item.get<std::size_t>());
    }
  }

  /// Like read(), but the key must be present.
  template <typename T>
  void require(const char* key, T& out) {
    if (!node_.contains(key)) throw ConfigError("missing key " + path(key));
    read(key, out);
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key " + path(item.key().c_str()));
    }
  }

  std::string path(const char* key) const { return where_ + "." + key; }

 private:
  bool present(const char* key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  template <typename T>
  void read_unsigned(const char* key, T& out) {
    if (!present(key)) return;
    const auto& v = node_.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(path(key) + " must be a nonnegative integer");
    out = v.get<T>();
  }

  const json& node_;
  std::string where_;
  std::set<std::string> seen_;
};

/// Finite doubles as numbers, everything else as null.
inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace modsel::detail
