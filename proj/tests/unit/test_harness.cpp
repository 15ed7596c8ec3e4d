#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modsel/harness.hpp"

using namespace modsel;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh scratch directory under the system temp dir.
fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("modsel_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

ExperimentConfig small_bandit() {
  ExperimentConfig c;
  c.bandit.seed = 3;
  c.algorithm.length = 200;
  c.n_seeds = 6;
  c.root_seed = 5;
  return c;
}

ExperimentConfig small_mdp() {
  ExperimentConfig c;
  c.mode = Mode::mdp;
  c.mdp.seed = 3;
  c.mdp.horizon = 2;
  c.algorithm.length = 60;
  c.n_seeds = 5;
  c.root_seed = 9;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults and nested keys") {
    const auto c = parse_config(R"({"mode": "mdp", "instance": {"horizon": 4, "value_bank": {"n_random": 3}},
                                     "algorithm": {"kind": "fixed", "class_index": 2, "beta_form": "covering"},
                                     "n_seeds": 7})");
    CHECK(c.mode == Mode::mdp);
    CHECK(c.mdp.horizon == 4);
    CHECK(c.mdp.bank.n_random == 3);
    CHECK(c.algorithm.kind == AlgorithmConfig::Kind::fixed);
    CHECK(c.algorithm.class_index == 2);
    CHECK(c.algorithm.beta_form == BetaForm::covering);
    CHECK(c.algorithm.delta == 0.1);
    CHECK(c.n_seeds == 7);
  }
  SUBCASE("overrides") {
    const auto c = parse_config(R"({"mode": "bandit"})",
                                {"algorithm.delta=0.05", "instance.class_sizes=[2,4,8]", "output_dir=out/x"});
    CHECK(c.algorithm.delta == 0.05);
    CHECK(c.bandit.class_sizes == std::vector<std::size_t>{2, 4, 8});
    CHECK(c.output_dir == "out/x");
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"mode": "bandit", "colour": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"instance": {"n_arms": 3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"algorithm": {"C1": 0.3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{}", {"algorithm.nope=1"}), ConfigError);
  }
  SUBCASE("malformed values") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mode": "pomdp"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n_seeds": -1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"algorithm": {"delta": "small"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"algorithm": {"kind": "greedy"}})"), ConfigError);
  }
  SUBCASE("validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(validate(c));
    c.algorithm.delta = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.algorithm.length = 1;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.n_seeds = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
  }
}

TEST_CASE("instance documents round-trip") {
  SUBCASE("bandit") {
    BanditGenConfig g;
    g.seed = 4;
    const auto inst = gen_bandit_instance(g);
    const auto text = to_json(inst);
    CHECK(instance_mode(text) == Mode::bandit);
    const auto back = bandit_instance_from_json(text);
    CHECK(to_json(back) == text);
    CHECK(back.truth().values == inst.truth().values);
    CHECK_THROWS_AS(mdp_instance_from_json(text), ConfigError);
  }
  SUBCASE("mdp") {
    MdpGenConfig g;
    g.seed = 4;
    const auto inst = gen_mdp_instance(g);
    const auto text = to_json(inst);
    CHECK(instance_mode(text) == Mode::mdp);
    const auto back = mdp_instance_from_json(text);
    CHECK(to_json(back) == text);
    CHECK(back.truth().data() == inst.truth().data());
  }
  SUBCASE("loaders re-check separability") {
    BanditGenConfig g;
    auto doc = to_json(gen_bandit_instance(g));
    const auto pos = doc.find("\"separation\": 1.0");
    REQUIRE(pos != std::string::npos);
    doc.replace(pos, 17, "\"separation\": 1.5");
    CHECK_THROWS_AS(bandit_instance_from_json(doc), ConfigError);
  }
}

TEST_CASE("single-class noiseless experiment") {
  const HypothesisFunction truth{{0.2, 0.7, 0.4}};
  const BanditInstance inst({{{truth}}, 1, 0.0, 0.0}, truth, 0.0);
  const auto dir = scratch("single");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "inst.json");
    out << to_json(inst);
  }
  ExperimentConfig c;
  c.instance_file = (dir / "inst.json").string();
  c.algorithm.length = 64;
  const auto r = run_experiment(c);
  CHECK(r.summary.mean_regret == 0.0);
  CHECK(r.summary.final_regret == std::vector<double>{0.0});
  for (const auto& row : r.summary.selection_rates) CHECK(row == std::vector<double>{1.0});
  CHECK(r.summary.late_selection_rate == 1.0);
  CHECK(r.summary.coverage_rate == 1.0);
  fs::remove_all(dir);
}

void check_outputs(const ExperimentConfig& config) {
  auto seq = config;
  seq.output_dir = scratch("seq").string();
  seq.jobs = 1;
  auto par = config;
  par.output_dir = scratch("par").string();
  par.jobs = 3;
  const auto a = run_experiment(seq);
  const auto b = run_experiment(par);

  // Byte-identical across thread counts.
  for (const auto& entry : fs::directory_iterator(seq.output_dir)) {
    const auto name = entry.path().filename();
    CAPTURE(name.string());
    CHECK(slurp(entry.path()) == slurp(fs::path(par.output_dir) / name));
  }
  CHECK(a.summary.final_regret == b.summary.final_regret);

  // One row per round or episode.
  for (std::size_t i = 0; i < config.n_seeds; ++i) {
    const auto csv = slurp(fs::path(seq.output_dir) / ("trace_seed_" + std::to_string(i) + ".csv"));
    CHECK(count_lines(csv) == config.algorithm.length + 1);
  }

  const auto& s = a.summary;
  CHECK(s.final_regret.size() == config.n_seeds);
  for (const auto& row : s.selection_rates) {
    double total = 0.0;
    for (double x : row) total += x;
    CHECK(total == doctest::Approx(1.0));
  }
  CHECK((s.coverage_rate >= 0.0 && s.coverage_rate <= 1.0));
  double mean = 0.0;
  for (double x : s.final_regret) mean += x;
  mean /= static_cast<double>(s.final_regret.size());
  CHECK(s.mean_regret == doctest::Approx(mean));

  CHECK(to_json(recompute_summary(seq.output_dir)) == to_json(a.summary));
  fs::remove_all(seq.output_dir);
  fs::remove_all(par.output_dir);
}

TEST_CASE("bandit experiment outputs") { check_outputs(small_bandit()); }

TEST_CASE("mdp experiment outputs") { check_outputs(small_mdp()); }

TEST_CASE("epoch sidecar rows") {
  EpochRecord first;
  first.epoch = {1, 0, 2, 0.05};
  first.chosen = 3;
  EpochRecord second;
  second.epoch = {2, 2, 4, 0.025};
  second.statistics = {0.5, 0.1, 0.0};
  second.gamma = 0.25;
  second.chosen = 2;
  const auto csv = epochs_csv({first, second}, 3, 7);
  CHECK(csv ==
        "run_id,epoch,m,T_m,gamma,chosen\n"
        "7,1,1,nan,nan,3\n7,1,2,nan,nan,3\n7,1,3,nan,nan,3\n"
        "7,2,1,0.5,0.25,2\n7,2,2,0.1,0.25,2\n7,2,3,0,0.25,2\n");
}

TEST_CASE("late-epoch selection") {
  auto rec = [](std::size_t chosen) {
    EpochRecord r;
    r.chosen = chosen;
    return r;
  };
  CHECK(late_epochs_select({rec(3), rec(1), rec(2), rec(2)}, 2));
  CHECK_FALSE(late_epochs_select({rec(3), rec(2), rec(1), rec(2)}, 2));
  // Five epochs: the final half is epochs 3, 4 and 5.
  CHECK(late_epochs_select({rec(3), rec(1), rec(2), rec(2), rec(2)}, 2));
  CHECK_FALSE(late_epochs_select({rec(3), rec(2), rec(1), rec(2), rec(2)}, 2));
}

TEST_CASE("suites") {
  CHECK(suite_names().size() == 5);
  CHECK_THROWS_AS(run_suite("bogus"), ConfigError);
  const auto cfgs = suite_experiments("oracle-compare");
  REQUIRE(cfgs.size() == 3);
  CHECK(cfgs[1].algorithm.class_index == cfgs[1].bandit.true_index);
  CHECK(cfgs[2].algorithm.class_index == cfgs[2].bandit.n_classes);
}
