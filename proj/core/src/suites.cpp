#include <cmath>

#include <fmt/format.h>

#include "modsel/harness.hpp"

namespace modsel {
namespace {

constexpr std::uint64_t kInstanceSeed = 1;

ExperimentConfig base(Mode mode, const SuiteOptions& options, const std::string& name, const std::string& label) {
  ExperimentConfig c;
  c.mode = mode;
  c.bandit.seed = kInstanceSeed;
  c.mdp.seed = kInstanceSeed;
  c.root_seed = options.root_seed;
  c.jobs = options.jobs;
  c.algorithm.delta = 0.1;
  c.algorithm.slack = 0.25;
  if (!options.output_dir.empty()) c.output_dir = (std::filesystem::path(options.output_dir) / name / label).string();
  return c;
}

/// |X| = 10, |F_1|, |F_2|, |F_3| = 4, 8, 32, m* = 2.
ExperimentConfig coverage_bandit(const SuiteOptions& o) {
  auto c = base(Mode::bandit, o, "coverage-bandit", "base");
  c.bandit.class_sizes = {4, 8, 32};
  c.algorithm.kind = AlgorithmConfig::Kind::fixed;
  c.algorithm.class_index = 2;
  c.algorithm.length = 512;
  c.n_seeds = 200;
  return c;
}

/// S = 4, A = 2, H = 3, |P_m| = 3, 6, 12, m* = 2.
ExperimentConfig coverage_mdp(const SuiteOptions& o) {
  auto c = base(Mode::mdp, o, "coverage-mdp", "base");
  c.mdp.class_sizes = {3, 6, 12};
  c.algorithm.kind = AlgorithmConfig::Kind::fixed;
  c.algorithm.class_index = 2;
  c.algorithm.length = 256;
  c.n_seeds = 200;
  return c;
}

/// Selection instance: |F_m| = 2, 4, 320, so ln|F_M| >= 4 ln|F_m*|.
ExperimentConfig selection_bandit(const SuiteOptions& o, const std::string& name, const std::string& label) {
  auto c = base(Mode::bandit, o, name, label);
  c.bandit.class_sizes = {2, 4, 320};
  c.algorithm.length = 4096;
  c.n_seeds = 100;
  return c;
}

ExperimentConfig selection_mdp(const SuiteOptions& o) {
  auto c = base(Mode::mdp, o, "selection", "arl");
  c.mdp.horizon = 2;
  c.mdp.class_sizes = {3, 6, 12};
  c.algorithm.length = 2048;
  c.n_seeds = 100;
  return c;
}

ExperimentConfig fixed_on(ExperimentConfig c, std::size_t class_index, std::size_t length, std::size_t seeds) {
  c.algorithm.kind = AlgorithmConfig::Kind::fixed;
  c.algorithm.class_index = class_index;
  c.algorithm.length = length;
  c.n_seeds = seeds;
  return c;
}

SuiteCheck at_least(std::string label, double measured, double threshold) {
  return {std::move(label), measured, ">=", threshold, measured >= threshold};
}

SuiteCheck at_most(std::string label, double measured, double threshold) {
  return {std::move(label), measured, "<=", threshold, measured <= threshold};
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"coverage-bandit", "coverage-mdp", "selection", "oracle-compare", "sublinearity"};
}

std::vector<ExperimentConfig> suite_experiments(const std::string& name, const SuiteOptions& o) {
  if (name == "coverage-bandit") return {coverage_bandit(o)};
  if (name == "coverage-mdp") return {coverage_mdp(o)};
  if (name == "selection") {
    auto abl = selection_bandit(o, name, "abl");
    return {abl, selection_mdp(o)};
  }
  if (name == "oracle-compare") {
    auto abl = selection_bandit(o, name, "abl");
    abl.n_seeds = 50;
    auto oracle = fixed_on(selection_bandit(o, name, "oracle"), 2, 4096, 50);
    auto full = fixed_on(selection_bandit(o, name, "nonadaptive"), 3, 4096, 50);
    return {abl, oracle, full};
  }
  if (name == "sublinearity") {
    return {fixed_on(selection_bandit(o, name, "oracle-4096"), 2, 4096, 50),
            fixed_on(selection_bandit(o, name, "oracle-256"), 2, 256, 50)};
  }
  throw ConfigError("unknown suite \"" + name + "\"");
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  const auto experiments = suite_experiments(name, options);
  std::vector<SummaryReport> s;
  for (const auto& config : experiments) s.push_back(run_experiment(config).summary);

  SuiteResult result{name, true, {}};
  if (name == "coverage-bandit" || name == "coverage-mdp") {
    result.checks.push_back(at_least("coverage", s[0].coverage_rate, 0.85));
  } else if (name == "selection") {
    result.checks.push_back(at_least("abl late-epoch selection", s[0].late_selection_rate, 0.90));
    result.checks.push_back(at_least("arl late-epoch selection", s[1].late_selection_rate, 0.90));
  } else if (name == "oracle-compare") {
    const double abl = s[0].mean_regret;
    const double oracle = s[1].mean_regret;
    const double full = s[2].mean_regret;
    const auto& sizes = experiments[0].bandit.class_sizes;
    const double entropy_ratio = std::log(static_cast<double>(sizes.back())) /
                                 std::log(static_cast<double>(sizes[experiments[0].bandit.true_index - 1]));
    result.checks.push_back(at_least("ln|F_M| / ln|F_m*|", entropy_ratio, 4.0));
    // Compared as ratios so a zero denominator shows up as inf rather than a silent pass.
    result.checks.push_back(at_most("abl / oracle mean regret", abl / oracle, 1.5));
    result.checks.push_back(at_most("abl / non-adaptive mean regret", abl / full, 1.1));
  } else if (name == "sublinearity") {
    const double long_rate = s[0].mean_regret / static_cast<double>(s[0].length);
    const double short_rate = s[1].mean_regret / static_cast<double>(s[1].length);
    result.checks.push_back(at_most("(R_4096/4096) / (R_256/256)", long_rate / short_rate, 0.5));
  }
  for (const auto& c : result.checks) result.passed = result.passed && c.passed;
  return result;
}

std::string format_result(const SuiteResult& result) {
  std::string out = fmt::format("{} {}", result.passed ? "PASS" : "FAIL", result.name);
  for (const auto& c : result.checks) {
    out += fmt::format(" | {}: {:.4g} {} {:.4g}{}", c.label, c.measured, c.relation, c.threshold, c.passed ? "" : " (!)");
  }
  return out;
}

}  // namespace modsel
