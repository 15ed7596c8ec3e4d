#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json_util.hpp"
#include "modsel/eluder.hpp"
#include "modsel/harness.hpp"

namespace modsel {
namespace {

using detail::json;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::filesystem::path trace_path(const std::filesystem::path& dir, std::size_t i) {
  return dir / fmt::format("trace_seed_{}.csv", i);
}

std::filesystem::path epochs_path(const std::filesystem::path& dir, std::size_t i) {
  return dir / fmt::format("epochs_seed_{}.csv", i);
}

/// The class run in each epoch, from the per-round (or per-episode) columns.
template <typename Record>
std::vector<std::size_t> epoch_classes(const std::vector<Record>& records) {
  std::vector<std::size_t> out;
  for (const auto& r : records) {
    if (r.epoch > out.size()) out.resize(r.epoch, 0);
    out[r.epoch - 1] = r.selected_class;
  }
  return out;
}

bool late_select(const std::vector<std::size_t>& classes, std::size_t target) {
  const std::size_t E = classes.size();
  for (std::size_t i = E / 2 + 1; i <= E; ++i) {
    if (classes[i - 1] != target) return false;
  }
  return E > 0;
}

/// Fills the CSV-derived fields of `s` from per-seed data.
void aggregate(SummaryReport& s, const std::vector<double>& finals, const std::vector<std::vector<std::size_t>>& classes) {
  s.n_seeds = finals.size();
  s.final_regret = finals;
  double sum = 0.0;
  for (double r : finals) sum += r;
  s.mean_regret = finals.empty() ? 0.0 : sum / static_cast<double>(finals.size());
  double sq = 0.0;
  for (double r : finals) sq += (r - s.mean_regret) * (r - s.mean_regret);
  s.stddev_regret = finals.size() > 1 ? std::sqrt(sq / static_cast<double>(finals.size() - 1)) : 0.0;

  std::size_t n_epochs = 0;
  for (const auto& c : classes) n_epochs = std::max(n_epochs, c.size());
  s.selection_rates.assign(n_epochs, std::vector<double>(s.n_classes, 0.0));
  std::size_t late = 0;
  for (const auto& c : classes) {
    for (std::size_t e = 0; e < c.size(); ++e) {
      if (c[e] >= 1 && c[e] <= s.n_classes) s.selection_rates[e][c[e] - 1] += 1.0;
    }
    if (late_select(c, s.true_index)) ++late;
  }
  for (auto& row : s.selection_rates) {
    for (auto& x : row) x /= static_cast<double>(classes.size());
  }
  s.late_selection_rate = classes.empty() ? 0.0 : static_cast<double>(late) / static_cast<double>(classes.size());
}

void set_coverage(SummaryReport& s, std::vector<bool> covered) {
  s.covered = std::move(covered);
  const auto hits = std::count(s.covered.begin(), s.covered.end(), true);
  s.coverage_rate = s.covered.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(s.covered.size());
}

/// Runs body(i) for i in [0, n) on `jobs` threads. The first exception (by
/// index) is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t n, std::size_t jobs, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(jobs, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t resolve_class(const AlgorithmConfig& a, std::size_t M) {
  const std::size_t c = a.class_index == 0 ? M : a.class_index;
  if (c < 1 || c > M) throw ConfigError("algorithm.class_index must lie in [1, M]");
  return c;
}

template <typename Model>
void fill_family(SummaryReport& s, const NestedFamily<Model>& family, double achieved_gap) {
  s.n_classes = family.size();
  s.true_index = family.true_index;
  s.separation = family.separation;
  s.locality = family.locality;
  s.achieved_gap = achieved_gap;
}

}  // namespace

bool late_epochs_select(const std::vector<EpochRecord>& epochs, std::size_t target) {
  std::vector<std::size_t> classes;
  for (const auto& e : epochs) classes.push_back(e.chosen);
  return late_select(classes, target);
}

std::string trace_csv(const RunTrace& trace, std::size_t run_id) {
  std::string out = "run_id,epoch,round,selected_class,action,reward,instant_regret,cum_regret\n";
  for (const auto& r : trace.rounds) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},{},{}\n", run_id, r.epoch, r.round, r.selected_class,
                   r.action, r.reward, r.instant_regret, r.cum_regret);
  }
  return out;
}

std::string trace_csv(const MdpRunTrace& trace, std::size_t run_id) {
  std::string out = "run_id,epoch,episode,selected_class,episode_value,optimal_value,instant_regret,cum_regret\n";
  for (const auto& e : trace.episodes) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},{},{}\n", run_id, e.epoch, e.episode,
                   e.selected_class, e.episode_value, e.optimal_value, e.instant_regret, e.cum_regret);
  }
  return out;
}

std::string epochs_csv(const std::vector<EpochRecord>& epochs, std::size_t n_classes, std::size_t run_id) {
  std::string out = "run_id,epoch,m,T_m,gamma,chosen\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& e : epochs) {
    for (std::size_t m = 1; m <= n_classes; ++m) {
      const double stat = e.statistics.size() >= m ? e.statistics[m - 1] : nan;
      fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{}\n", run_id, e.epoch.index, m, stat, e.gamma,
                     e.chosen);
    }
  }
  return out;
}

std::string to_json(const SummaryReport& s) {
  json doc;
  doc["mode"] = s.mode == Mode::bandit ? "bandit" : "mdp";
  doc["n_seeds"] = s.n_seeds;
  doc["length"] = s.length;
  doc["n_classes"] = s.n_classes;
  doc["true_index"] = s.true_index;
  doc["separation"] = s.separation;
  doc["locality"] = s.locality;
  doc["achieved_gap"] = detail::number_or_null(s.achieved_gap);
  doc["final_regret"] = s.final_regret;
  doc["mean_regret"] = s.mean_regret;
  doc["stddev_regret"] = s.stddev_regret;
  doc["selection_rates"] = s.selection_rates;
  doc["late_selection_rate"] = s.late_selection_rate;
  doc["covered"] = s.covered;
  doc["coverage_rate"] = s.coverage_rate;
  if (!s.complexity.empty()) {
    json rows = json::array();
    for (const auto& c : s.complexity) {
      rows.push_back({{"class", c.index},
                      {"size", c.size},
                      {"entropy", c.entropy},
                      {"eluder_epsilon", c.eluder.epsilon},
                      {"eluder_dimension", c.eluder.dimension},
                      {"eluder_exact", c.eluder.exact},
                      {"eluder_witness", c.eluder.witness}});
    }
    doc["complexity"] = std::move(rows);
  }
  return doc.dump(1) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result;
  SummaryReport& s = result.summary;
  s.mode = config.mode;
  s.length = config.algorithm.length;
  const std::size_t n = config.n_seeds;
  const auto& alg = config.algorithm;
  const std::filesystem::path dir = config.output_dir;
  const bool write = !config.output_dir.empty();
  if (write) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  const double eps = config.eluder_epsilon > 0.0 ? config.eluder_epsilon : 1.0 / static_cast<double>(alg.length);

  std::vector<double> finals(n);
  std::vector<std::vector<std::size_t>> classes(n);
  std::vector<bool> covered(n);

  if (config.mode == Mode::bandit) {
    const BanditInstance instance = config.instance_file.empty()
                                        ? gen_bandit_instance(config.bandit)
                                        : bandit_instance_from_json(read_file(config.instance_file));
    const auto& family = instance.family();
    fill_family(s, family, verify_separability_bandit(family, instance.truth()).achieved_gap);
    const std::size_t fixed = resolve_class(alg, family.size());
    if (write) write_file(dir / "instance.json", to_json(instance));
    result.bandit_traces.resize(n);
    parallel_for(n, config.jobs, [&](std::size_t i) {
      Rng rng(derive_seed(config.root_seed, i));
      auto& trace = result.bandit_traces[i];
      trace = alg.kind == AlgorithmConfig::Kind::adaptive
                  ? abl_run(instance, alg.length, alg.delta, alg.slack, rng)
                  : bandit_learning_run(family.at(fixed), instance, alg.length, alg.delta, rng, fixed);
      finals[i] = trace.final_regret();
      classes[i] = epoch_classes(trace.rounds);
      covered[i] = trace.covered();
      if (write) {
        write_file(trace_path(dir, i), trace_csv(trace, i));
        write_file(epochs_path(dir, i), epochs_csv(trace.epochs, family.size(), i));
      }
    });
    if (config.report_complexity) {
      for (std::size_t m = 1; m <= family.size(); ++m) {
        const auto& cls = family.at(m);
        s.complexity.push_back({m, cls.size(), metric_entropy(cls.size()), eluder_dimension(tabulate(cls), eps)});
      }
    }
  } else {
    const MdpInstance instance = config.instance_file.empty() ? gen_mdp_instance(config.mdp)
                                                              : mdp_instance_from_json(read_file(config.instance_file));
    const auto& family = instance.family();
    const auto bank = value_bank(instance, config.mdp.bank);
    fill_family(s, family, verify_separability_mdp(family, instance.truth(), bank).achieved_gap);
    const std::size_t fixed = resolve_class(alg, family.size());
    if (write) write_file(dir / "instance.json", to_json(instance));
    const VtrOptions options{alg.beta_form, std::nullopt};
    result.mdp_traces.resize(n);
    parallel_for(n, config.jobs, [&](std::size_t i) {
      Rng rng(derive_seed(config.root_seed, i));
      auto& trace = result.mdp_traces[i];
      trace = alg.kind == AlgorithmConfig::Kind::adaptive
                  ? arl_run(instance, alg.length, alg.delta, alg.slack, rng, options)
                  : ucrl_vtr_run(family.at(fixed), instance, alg.length, alg.delta, rng, fixed, options);
      finals[i] = trace.final_regret();
      classes[i] = epoch_classes(trace.episodes);
      covered[i] = trace.covered();
      if (write) {
        write_file(trace_path(dir, i), trace_csv(trace, i));
        write_file(epochs_path(dir, i), epochs_csv(trace.epochs, family.size(), i));
      }
    });
    if (config.report_complexity) {
      for (std::size_t m = 1; m <= family.size(); ++m) {
        const auto& cls = family.at(m);
        s.complexity.push_back(
            {m, cls.size(), metric_entropy(cls.size()), eluder_dimension(induced_value_class(cls, bank), eps)});
      }
    }
  }

  aggregate(s, finals, classes);
  set_coverage(s, std::move(covered));
  if (write) write_file(dir / "summary.json", to_json(s));
  return result;
}

SummaryReport recompute_summary(const std::filesystem::path& dir) {
  SummaryReport s;
  const json instance = detail::parse_json(read_file(dir / "instance.json"), "instance.json");
  s.mode = instance.at("mode").get<std::string>() == "mdp" ? Mode::mdp : Mode::bandit;
  s.n_classes = instance.at("classes").size();
  s.true_index = instance.at("true_index").get<std::size_t>();
  s.separation = instance.at("separation").get<double>();
  s.locality = instance.at("locality").get<double>();

  std::vector<double> finals;
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; std::filesystem::exists(trace_path(dir, i)); ++i) {
    std::istringstream in(read_file(trace_path(dir, i)));
    std::string line;
    std::getline(in, line);
    std::vector<std::size_t> epoch_class;
    double last = 0.0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream row(line);
      for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
      if (cells.size() != 8) throw ConfigError(fmt::format("malformed row in {}", trace_path(dir, i).string()));
      const auto epoch = std::stoul(cells[1]);
      if (epoch > epoch_class.size()) epoch_class.resize(epoch, 0);
      epoch_class[epoch - 1] = std::stoul(cells[3]);
      last = std::strtod(cells[7].c_str(), nullptr);
      ++rows;
    }
    s.length = rows;
    finals.push_back(last);
    classes.push_back(std::move(epoch_class));
  }
  if (finals.empty()) throw ConfigError("no trace_seed_<i>.csv files in " + dir.string());
  aggregate(s, finals, classes);

  if (std::filesystem::exists(dir / "summary.json")) {
    const json old = detail::parse_json(read_file(dir / "summary.json"), "summary.json");
    if (old.contains("covered") && old["covered"].size() == finals.size()) {
      set_coverage(s, old["covered"].get<std::vector<bool>>());
    }
    if (old.contains("achieved_gap") && old["achieved_gap"].is_number()) {
      s.achieved_gap = old["achieved_gap"].get<double>();
    } else {
      s.achieved_gap = std::numeric_limits<double>::infinity();
    }
  }
  return s;
}

}  // namespace modsel
