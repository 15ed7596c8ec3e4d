#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modsel/bandit.hpp"
#include "modsel/eluder.hpp"
#include "modsel/generators.hpp"
#include "modsel/mdp.hpp"

namespace modsel {

enum class Mode { bandit, mdp };

struct AlgorithmConfig {
  enum class Kind { adaptive, fixed };
  Kind kind = Kind::adaptive;
  /// Class used by fixed runs (1-based); 0 means the largest class.
  std::size_t class_index = 0;
  double delta = 0.1;
  /// C_1 (bandit) or C_2 (MDP).
  double slack = 0.25;
  /// T rounds (bandit) or K episodes (MDP).
  std::size_t length = 4096;
  BetaForm beta_form = BetaForm::finite;
};

struct ExperimentConfig {
  Mode mode = Mode::bandit;
  BanditGenConfig bandit;
  MdpGenConfig mdp;
  /// When set, the instance is loaded from this file instead of generated.
  std::string instance_file;
  AlgorithmConfig algorithm;
  std::size_t n_seeds = 1;
  std::uint64_t root_seed = 0;
  /// Empty: keep everything in memory.
  std::string output_dir;
  std::size_t jobs = 1;
  bool report_complexity = false;
  /// Eluder scale for the complexity report; 0 means 1/length.
  double eluder_epsilon = 0.0;
};

/// Parses the JSON config document, after applying dotted `key=value`
/// overrides. Unknown keys are rejected with ConfigError.
ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
/// Throws ConfigError unless δ in (0,1], length >= 2 and n_seeds >= 1.
void validate(const ExperimentConfig& config);

std::string to_json(const BanditInstance& instance);
std::string to_json(const MdpInstance& instance);
/// Both loaders rebuild and re-verify the instance (nesting and separability).
BanditInstance bandit_instance_from_json(std::string_view text);
MdpInstance mdp_instance_from_json(std::string_view text);
/// Mode stored in an instance document.
Mode instance_mode(std::string_view text);

struct ClassComplexity {
  std::size_t index = 1;
  std::size_t size = 0;
  double entropy = 0.0;
  EluderReport eluder;
};

struct SummaryReport {
  Mode mode = Mode::bandit;
  std::size_t n_seeds = 0;
  std::size_t length = 0;
  std::size_t n_classes = 0;
  std::size_t true_index = 1;
  std::vector<double> final_regret;
  double mean_regret = 0.0;
  double stddev_regret = 0.0;
  /// selection_rates[e][m-1]: fraction of seeds running class m in epoch e+1.
  std::vector<std::vector<double>> selection_rates;
  /// Fraction of seeds whose selected class equals m* in every epoch of the
  /// final half (epochs i > E/2).
  double late_selection_rate = 0.0;
  std::vector<bool> covered;
  double coverage_rate = 0.0;
  double separation = 0.0;
  double locality = 0.0;
  double achieved_gap = 0.0;
  std::vector<ClassComplexity> complexity;
};

std::string to_json(const SummaryReport& summary);

/// Per-seed traces are kept alongside the summary.
struct ExperimentResult {
  SummaryReport summary;
  std::vector<RunTrace> bandit_traces;
  std::vector<MdpRunTrace> mdp_traces;
};

/// Generates or loads the instance, runs n_seeds independent runs with seeds
/// root_seed XOR run_index on `jobs` threads, and writes instance.json,
/// trace_seed_<i>.csv, epochs_seed_<i>.csv and summary.json when output_dir
/// is set. Output bytes do not depend on `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Rebuilds the CSV-derived parts of the summary from a run directory.
/// Coverage flags are not part of the CSV schema and are carried over from
/// summary.json when present.
SummaryReport recompute_summary(const std::filesystem::path& dir);

/// CSV rendering used by run_experiment (exposed for tests).
std::string trace_csv(const RunTrace& trace, std::size_t run_id);
std::string trace_csv(const MdpRunTrace& trace, std::size_t run_id);
std::string epochs_csv(const std::vector<EpochRecord>& epochs, std::size_t n_classes, std::size_t run_id);

/// Final half of the epochs all ran class `target`.
bool late_epochs_select(const std::vector<EpochRecord>& epochs, std::size_t target);

struct SuiteOptions {
  std::uint64_t root_seed = 1;
  std::size_t jobs = 1;
  /// Each experiment of the suite writes into a subdirectory; empty = memory only.
  std::string output_dir;
};

struct SuiteCheck {
  std::string label;
  double measured = 0.0;
  std::string relation;  // "<=" or ">="
  double threshold = 0.0;
  bool passed = false;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::vector<SuiteCheck> checks;
};

std::vector<std::string> suite_names();
/// Runs one named acceptance suite at full scale. Unknown name: ConfigError.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options = {});
/// The experiment configs a suite runs, in order (exposed for tests and docs).
std::vector<ExperimentConfig> suite_experiments(const std::string& name, const SuiteOptions& options = {});
std::string format_result(const SuiteResult& result);

}  // namespace modsel
