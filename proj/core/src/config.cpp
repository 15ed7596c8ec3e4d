#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "modsel/harness.hpp"

namespace modsel {
namespace {

using detail::json;
using detail::ObjectReader;

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty path segment in override " + key);
    if (!node->is_object()) throw ConfigError("override path " + key + " crosses a non-object value");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

Mode parse_mode(const std::string& name) {
  if (name == "bandit") return Mode::bandit;
  if (name == "mdp") return Mode::mdp;
  throw ConfigError("mode must be \"bandit\" or \"mdp\", got \"" + name + "\"");
}

void read_bandit(const json& node, BanditGenConfig& c) {
  ObjectReader r(node, "instance");
  r.read("n_actions", c.n_actions);
  r.read("n_classes", c.n_classes);
  r.read("true_index", c.true_index);
  r.read("separation", c.separation);
  r.read("locality", c.locality);
  r.read("sigma", c.sigma);
  r.read("class_sizes", c.class_sizes);
  r.read("seed", c.seed);
  r.read("max_attempts", c.max_attempts);
  r.finish();
}

void read_mdp(const json& node, MdpGenConfig& c) {
  ObjectReader r(node, "instance");
  r.read("n_states", c.n_states);
  r.read("n_actions", c.n_actions);
  r.read("horizon", c.horizon);
  r.read("n_classes", c.n_classes);
  r.read("true_index", c.true_index);
  r.read("separation", c.separation);
  r.read("locality", c.locality);
  r.read("class_sizes", c.class_sizes);
  r.read("seed", c.seed);
  r.read("max_attempts", c.max_attempts);
  if (r.has("value_bank")) {
    ObjectReader b(r.child("value_bank"), "instance.value_bank");
    b.read("all_kernels", c.bank.all_kernels);
    b.read("n_random", c.bank.n_random);
    b.read("seed", c.bank.seed);
    b.finish();
  }
  r.finish();
}

void read_algorithm(const json& node, AlgorithmConfig& a) {
  ObjectReader r(node, "algorithm");
  std::string kind = a.kind == AlgorithmConfig::Kind::adaptive ? "adaptive" : "fixed";
  r.read("kind", kind);
  if (kind == "adaptive") {
    a.kind = AlgorithmConfig::Kind::adaptive;
  } else if (kind == "fixed") {
    a.kind = AlgorithmConfig::Kind::fixed;
  } else {
    throw ConfigError("algorithm.kind must be \"adaptive\" or \"fixed\"");
  }
  r.read("class_index", a.class_index);
  r.read("delta", a.delta);
  r.read("slack", a.slack);
  r.read("length", a.length);
  std::string form = a.beta_form == BetaForm::finite ? "finite" : "covering";
  r.read("beta_form", form);
  if (form == "finite") {
    a.beta_form = BetaForm::finite;
  } else if (form == "covering") {
    a.beta_form = BetaForm::covering;
  } else {
    throw ConfigError("algorithm.beta_form must be \"finite\" or \"covering\"");
  }
  r.finish();
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  json root = detail::parse_json(text, "config");
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& o : overrides) apply_override(root, o);

  ExperimentConfig config;
  ObjectReader r(root, "config");
  std::string mode = "bandit";
  r.read("mode", mode);
  config.mode = parse_mode(mode);
  if (r.has("instance")) {
    if (config.mode == Mode::bandit) {
      read_bandit(r.child("instance"), config.bandit);
    } else {
      read_mdp(r.child("instance"), config.mdp);
    }
  }
  r.read("instance_file", config.instance_file);
  if (r.has("algorithm")) read_algorithm(r.child("algorithm"), config.algorithm);
  r.read("n_seeds", config.n_seeds);
  r.read("root_seed", config.root_seed);
  r.read("output_dir", config.output_dir);
  r.read("jobs", config.jobs);
  r.read("report_complexity", config.report_complexity);
  r.read("eluder_epsilon", config.eluder_epsilon);
  r.finish();
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

void validate(const ExperimentConfig& config) {
  const auto& a = config.algorithm;
  if (!(a.delta > 0.0 && a.delta <= 1.0)) throw ConfigError("algorithm.delta must lie in (0,1]");
  if (a.length < 2) throw ConfigError("algorithm.length must be at least 2");
  if (!(a.slack >= 0.0)) throw ConfigError("algorithm.slack must be nonnegative");
  if (config.n_seeds < 1) throw ConfigError("n_seeds must be at least 1");
  if (config.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (config.eluder_epsilon < 0.0) throw ConfigError("eluder_epsilon must be nonnegative");
}

}  // namespace modsel
