#include "json_util.hpp"
#include "modsel/harness.hpp"

namespace modsel {
namespace {

using detail::json;
using detail::ObjectReader;

std::vector<double> read_numbers(const json& node, const std::string& where) {
  if (!node.is_array()) throw ConfigError(where + " must be an array");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    if (!v.is_number()) throw ConfigError(where + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json nested_kernel(const TransitionKernel& p) {
  json rows = json::array();
  for (std::size_t s = 0; s < p.n_states(); ++s) {
    json per_action = json::array();
    for (std::size_t a = 0; a < p.n_actions(); ++a) {
      const auto row = p.row(s, a);
      per_action.push_back(std::vector<double>(row.begin(), row.end()));
    }
    rows.push_back(std::move(per_action));
  }
  return rows;
}

TransitionKernel read_kernel(const json& node, std::size_t S, std::size_t A, const std::string& where) {
  if (!node.is_array() || node.size() != S) throw ConfigError(where + " must have one entry per state");
  std::vector<double> probs;
  probs.reserve(S * A * S);
  for (std::size_t s = 0; s < S; ++s) {
    if (!node[s].is_array() || node[s].size() != A) throw ConfigError(where + " must have one row per action");
    for (std::size_t a = 0; a < A; ++a) {
      const auto row = read_numbers(node[s][a], where);
      if (row.size() != S) throw ConfigError(where + " rows must have one entry per state");
      probs.insert(probs.end(), row.begin(), row.end());
    }
  }
  return {S, A, std::move(probs)};
}

template <typename Model>
void write_family_fields(json& doc, const NestedFamily<Model>& family) {
  doc["true_index"] = family.true_index;
  doc["separation"] = family.separation;
  doc["locality"] = family.locality;
}

template <typename Model>
void read_family_fields(ObjectReader& r, NestedFamily<Model>& family) {
  r.require("true_index", family.true_index);
  r.require("separation", family.separation);
  r.require("locality", family.locality);
}

}  // namespace

std::string to_json(const BanditInstance& instance) {
  const auto& family = instance.family();
  json doc;
  doc["mode"] = "bandit";
  doc["n_actions"] = instance.n_actions();
  doc["sigma"] = instance.sigma();
  write_family_fields(doc, family);
  doc["truth"] = instance.truth().values;
  json classes = json::array();
  for (const auto& cls : family.classes) {
    json members = json::array();
    for (const auto& f : cls) members.push_back(f.values);
    classes.push_back(std::move(members));
  }
  doc["classes"] = std::move(classes);
  return doc.dump(1) + "\n";
}

std::string to_json(const MdpInstance& instance) {
  const auto& family = instance.family();
  const std::size_t S = instance.n_states();
  const std::size_t A = instance.n_actions();
  json doc;
  doc["mode"] = "mdp";
  doc["n_states"] = S;
  doc["n_actions"] = A;
  doc["horizon"] = instance.horizon();
  doc["initial_state"] = instance.initial_state();
  write_family_fields(doc, family);
  json reward = json::array();
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<double> row(A);
    for (std::size_t a = 0; a < A; ++a) row[a] = instance.reward()(s, a);
    reward.push_back(row);
  }
  doc["reward"] = std::move(reward);
  doc["truth"] = nested_kernel(instance.truth());
  json classes = json::array();
  for (const auto& cls : family.classes) {
    json members = json::array();
    for (const auto& p : cls) members.push_back(nested_kernel(p));
    classes.push_back(std::move(members));
  }
  doc["classes"] = std::move(classes);
  return doc.dump(1) + "\n";
}

Mode instance_mode(std::string_view text) {
  const json doc = detail::parse_json(text, "instance");
  if (!doc.is_object() || !doc.contains("mode") || !doc["mode"].is_string()) {
    throw ConfigError("instance document needs a string \"mode\"");
  }
  const auto mode = doc["mode"].get<std::string>();
  if (mode == "bandit") return Mode::bandit;
  if (mode == "mdp") return Mode::mdp;
  throw ConfigError("unknown instance mode \"" + mode + "\"");
}

BanditInstance bandit_instance_from_json(std::string_view text) {
  const json doc = detail::parse_json(text, "instance");
  ObjectReader r(doc, "instance");
  std::string mode;
  r.require("mode", mode);
  if (mode != "bandit") throw ConfigError("instance mode is not bandit");
  std::size_t n_actions = 0;
  double sigma = 0.0;
  r.require("n_actions", n_actions);
  r.require("sigma", sigma);
  FunctionFamily family;
  read_family_fields(r, family);
  if (!r.has("truth") || !r.has("classes")) throw ConfigError("instance needs truth and classes");
  HypothesisFunction truth{read_numbers(r.child("truth"), "instance.truth")};
  if (truth.size() != n_actions) throw ConfigError("instance.truth must have n_actions entries");
  const json& classes = r.child("classes");
  if (!classes.is_array()) throw ConfigError("instance.classes must be an array");
  for (const auto& cls : classes) {
    if (!cls.is_array()) throw ConfigError("each class must be an array of functions");
    std::vector<HypothesisFunction> members;
    for (const auto& f : cls) members.push_back({read_numbers(f, "instance.classes")});
    family.classes.push_back(std::move(members));
  }
  r.finish();
  BanditInstance instance(std::move(family), std::move(truth), sigma);
  const auto report = verify_separability_bandit(instance.family(), instance.truth());
  if (!report.holds) {
    throw ConfigError("instance fails local separability: achieved gap " + std::to_string(report.achieved_gap));
  }
  return instance;
}

MdpInstance mdp_instance_from_json(std::string_view text) {
  const json doc = detail::parse_json(text, "instance");
  ObjectReader r(doc, "instance");
  std::string mode;
  r.require("mode", mode);
  if (mode != "mdp") throw ConfigError("instance mode is not mdp");
  std::size_t S = 0, A = 0, H = 0, s1 = 0;
  r.require("n_states", S);
  r.require("n_actions", A);
  r.require("horizon", H);
  r.require("initial_state", s1);
  if (S == 0 || A == 0) throw ConfigError("instance needs at least one state and action");
  KernelFamily family;
  read_family_fields(r, family);
  if (!r.has("reward") || !r.has("truth") || !r.has("classes")) {
    throw ConfigError("instance needs reward, truth and classes");
  }
  const json& reward_node = r.child("reward");
  if (!reward_node.is_array() || reward_node.size() != S) throw ConfigError("instance.reward must have S rows");
  RewardTable reward{S, A, {}};
  for (const auto& row : reward_node) {
    const auto values = read_numbers(row, "instance.reward");
    if (values.size() != A) throw ConfigError("instance.reward rows must have A entries");
    reward.values.insert(reward.values.end(), values.begin(), values.end());
  }
  TransitionKernel truth = read_kernel(r.child("truth"), S, A, "instance.truth");
  const json& classes = r.child("classes");
  if (!classes.is_array()) throw ConfigError("instance.classes must be an array");
  for (const auto& cls : classes) {
    if (!cls.is_array()) throw ConfigError("each class must be an array of kernels");
    std::vector<TransitionKernel> members;
    for (const auto& p : cls) members.push_back(read_kernel(p, S, A, "instance.classes"));
    family.classes.push_back(std::move(members));
  }
  r.finish();
  MdpInstance instance(std::move(family), std::move(truth), std::move(reward), H, s1);
  const auto report = verify_separability_mdp(instance.family(), instance.truth(), value_bank(instance));
  if (!report.holds) {
    throw ConfigError("instance fails local separability on the value bank: achieved gap " +
                      std::to_string(report.achieved_gap));
  }
  return instance;
}

}  // namespace modsel
