#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "modsel/harness.hpp"

namespace {

constexpr int kFailure = 1;
constexpr int kConfigError = 2;

modsel::ExperimentConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  if (path.empty()) return modsel::parse_config("{}", overrides);
  return modsel::load_config(path, overrides);
}

int cmd_gen(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out,
            const std::vector<std::string>& overrides) {
  auto config = load(config_path, overrides);
  std::string doc;
  if (config.mode == modsel::Mode::bandit) {
    if (seed) config.bandit.seed = *seed;
    doc = modsel::to_json(modsel::gen_bandit_instance(config.bandit));
  } else {
    if (seed) config.mdp.seed = *seed;
    doc = modsel::to_json(modsel::gen_mdp_instance(config.mdp));
  }
  if (out.empty()) {
    std::cout << doc;
    return 0;
  }
  std::filesystem::create_directories(out);
  const auto path = std::filesystem::path(out) / "instance.json";
  std::ofstream(path, std::ios::binary) << doc;
  fmt::print("wrote {}\n", path.string());
  return 0;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out,
            std::optional<std::size_t> jobs, const std::vector<std::string>& overrides) {
  auto config = load(config_path, overrides);
  if (seed) config.root_seed = *seed;
  if (!out.empty()) config.output_dir = out;
  if (jobs) config.jobs = *jobs;
  modsel::validate(config);
  const auto result = modsel::run_experiment(config);
  const auto& s = result.summary;
  fmt::print("seeds {} | mean regret {:.6g} (sd {:.6g}) | coverage {:.4g} | late-epoch selection of m*={} {:.4g}\n",
             s.n_seeds, s.mean_regret, s.stddev_regret, s.coverage_rate, s.true_index, s.late_selection_rate);
  if (!config.output_dir.empty()) fmt::print("artifacts in {}\n", config.output_dir);
  return 0;
}

int cmd_suite(const std::string& name, std::optional<std::uint64_t> seed, const std::string& out,
              std::optional<std::size_t> jobs) {
  modsel::SuiteOptions options;
  if (seed) options.root_seed = *seed;
  if (jobs) options.jobs = *jobs;
  options.output_dir = out;
  const auto result = modsel::run_suite(name, options);
  fmt::print("{}\n", modsel::format_result(result));
  return result.passed ? 0 : kFailure;
}

int cmd_report(const std::string& dir) {
  const auto summary = modsel::recompute_summary(dir);
  std::cout << modsel::to_json(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model selection for bandits and episodic RL over nested hypothesis classes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string suite_name;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Root seed (instance seed for gen)");
    cmd->add_option("--out", out, "Output directory");
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  gen->add_option("--override", overrides, "Dotted key=value applied to the config");
  add_common(gen);

  auto* run = app.add_subcommand("run", "Run an experiment from a config");
  run->add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  run->add_option("--override", overrides, "Dotted key=value applied to the config");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_common(run);

  auto* suite = app.add_subcommand("suite", "Run a named acceptance suite");
  suite->add_option("name", suite_name, "coverage-bandit | coverage-mdp | selection | oracle-compare | sublinearity")
      ->required();
  suite->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_common(suite);

  auto* report = app.add_subcommand("report", "Recompute the summary from a run directory");
  report->add_option("--out", out, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*gen) return cmd_gen(config_path, seed, out, overrides);
    if (*run) return cmd_run(config_path, seed, out, jobs, overrides);
    if (*suite) return cmd_suite(suite_name, seed, out, jobs);
    if (*report) return cmd_report(out);
  } catch (const modsel::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kFailure;
  }
  return kFailure;
}
