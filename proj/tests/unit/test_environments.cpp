#include <doctest.h>

#include <cmath>

#include "modsel/environments.hpp"
#include "modsel/generators.hpp"
#include "modsel/harness.hpp"

using namespace modsel;

namespace {

BanditInstance three_arm(double sigma) {
  const HypothesisFunction truth{{0.2, 0.8, 0.5}};
  FunctionFamily family{{{truth}}, 1, 0.0, 0.0};
  return {family, truth, sigma};
}

}  // namespace

TEST_CASE("sample_reward") {
  SUBCASE("noiseless") {
    const auto inst = three_arm(0.0);
    Rng rng(1);
    for (std::size_t a = 0; a < 3; ++a) CHECK(sample_reward(inst, a, rng) == inst.truth()(a));
  }
  SUBCASE("bounded noise and seeded replay") {
    const auto inst = three_arm(0.1);
    Rng a(9), b(9);
    const double x1 = sample_reward(inst, 1, a), x2 = sample_reward(inst, 1, a);
    CHECK(x1 != x2);
    CHECK(sample_reward(inst, 1, b) == x1);
    CHECK(sample_reward(inst, 1, b) == x2);
    Rng rng(10);
    for (int i = 0; i < 10000; ++i) CHECK(std::abs(sample_reward(inst, 2, rng) - 0.5) <= 0.1);
  }
  SUBCASE("law of large numbers") {
    const auto inst = three_arm(0.1);
    Rng rng(11);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_reward(inst, 0, rng);
    CHECK(std::abs(sum / n - 0.2) <= 3.0 * 0.1 / std::sqrt(static_cast<double>(n)));
  }
  SUBCASE("out of range") {
    const auto inst = three_arm(0.1);
    Rng rng(1);
    CHECK_THROWS_AS(sample_reward(inst, 3, rng), std::out_of_range);
  }
  SUBCASE("cached optimum") {
    const auto inst = three_arm(0.1);
    CHECK(inst.best_action() == 1);
    CHECK(inst.best_value() == 0.8);
  }
}

TEST_CASE("mdp_step") {
  const std::size_t next[] = {1, 0, 1, 1};
  const auto det = TransitionKernel::deterministic(2, 2, next);
  const RewardTable r{2, 2, {0.0, 0.0, 1.0, 1.0}};

  SUBCASE("deterministic row") {
    MdpInstance inst({{{det}}, 1, 0.0, 0.0}, det, r, 2, 0);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) CHECK(mdp_step(inst, 0, 0, rng) == 1);
    CHECK_THROWS(mdp_step(inst, 2, 0, rng));
  }
  SUBCASE("uniform row frequencies") {
    std::vector<double> probs(4 * 1 * 4, 0.25);
    const TransitionKernel p(4, 1, probs);
    MdpInstance inst({{{p}}, 1, 0.0, 0.0}, p, {4, 1, {0.0, 0.0, 0.0, 0.0}}, 1, 0);
    Rng rng(4);
    std::vector<int> counts(4, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[mdp_step(inst, 2, 0, rng)];
    for (int c : counts) CHECK(std::abs(c / static_cast<double>(n) - 0.25) <= 0.01);
  }
  SUBCASE("seeded replay") {
    const TransitionKernel p(2, 2, {0.3, 0.7, 0.5, 0.5, 0.9, 0.1, 0.4, 0.6});
    MdpInstance inst({{{p}}, 1, 0.0, 0.0}, p, r, 3, 0);
    Rng a(12), b(12);
    std::size_t sa = 0, sb = 0;
    for (int i = 0; i < 200; ++i) {
      sa = mdp_step(inst, sa, i % 2, a);
      sb = mdp_step(inst, sb, i % 2, b);
      CHECK(sa == sb);
    }
  }
}

TEST_CASE("instance validation") {
  const HypothesisFunction f{{0.2, 0.4}};
  const HypothesisFunction g{{0.6, 0.4}};
  CHECK_THROWS_AS(BanditInstance({{{g}, {g, f}}, 1, 0.0, 0.0}, f, 0.1), ConfigError);
  CHECK_THROWS_AS(BanditInstance({{{f}}, 1, 0.0, 0.0}, f, -1.0), ConfigError);
  CHECK_THROWS_AS(BanditInstance({{{HypothesisFunction{{1.5, 0.0}}}}, 1, 0.0, 0.0}, HypothesisFunction{{1.5, 0.0}}, 0.1),
                  ConfigError);
}

TEST_CASE("bandit generator") {
  SUBCASE("single class") {
    BanditGenConfig c;
    c.n_classes = 1;
    c.true_index = 1;
    c.class_sizes = {5};
    const auto inst = gen_bandit_instance(c);
    CHECK(inst.family().size() == 1);
    CHECK(contains(std::span<const HypothesisFunction>(inst.family().at(1)), inst.truth()));
  }
  SUBCASE("separated instance verified after the fact") {
    BanditGenConfig c;
    c.separation = 0.5;
    c.locality = 0.02;
    c.seed = 7;
    const auto inst = gen_bandit_instance(c);
    CHECK(verify_nesting(inst.family(), inst.truth()));
    const auto report = verify_separability_bandit(inst.family(), inst.truth());
    CHECK(report.holds);
    CHECK(report.achieved_gap >= 0.5 - kEqualityTolerance);
    for (std::size_t m = 1; m <= 3; ++m) CHECK(inst.family().at(m).size() == c.class_sizes[m - 1]);
  }
  SUBCASE("same seed, same instance") {
    BanditGenConfig c;
    c.seed = 7;
    CHECK(to_json(gen_bandit_instance(c)) == to_json(gen_bandit_instance(c)));
    BanditGenConfig d = c;
    d.seed = 8;
    CHECK(to_json(gen_bandit_instance(c)) != to_json(gen_bandit_instance(d)));
  }
  SUBCASE("infeasible settings") {
    BanditGenConfig c;
    c.separation = 0.1;
    CHECK_THROWS_AS(gen_bandit_instance(c), ConfigError);
    c = {};
    c.class_sizes = {4, 2, 8};
    CHECK_THROWS_AS(gen_bandit_instance(c), ConfigError);
  }
}

TEST_CASE("mdp generator") {
  SUBCASE("single class") {
    MdpGenConfig c;
    c.n_classes = 1;
    c.true_index = 1;
    c.class_sizes = {2};
    const auto inst = gen_mdp_instance(c);
    CHECK(inst.family().size() == 1);
  }
  SUBCASE("separated instance verified after the fact") {
    MdpGenConfig c;
    c.separation = 0.6;
    c.locality = 0.02;
    c.seed = 11;
    const auto inst = gen_mdp_instance(c);
    CHECK(verify_nesting(inst.family(), inst.truth()));
    CHECK(verify_separability_mdp(inst.family(), inst.truth(), value_bank(inst)).holds);
  }
  SUBCASE("same seed, same instance") {
    MdpGenConfig c;
    c.seed = 11;
    CHECK(to_json(gen_mdp_instance(c)) == to_json(gen_mdp_instance(c)));
  }
  SUBCASE("value bank contents") {
    MdpGenConfig c;
    const auto inst = gen_mdp_instance(c);
    CHECK(value_bank(inst).size() == c.horizon);
    ValueBankOptions wide;
    wide.n_random = 16;
    const auto bank = value_bank(inst, wide);
    CHECK(bank.size() == c.horizon + 16);
    for (std::size_t i = c.horizon; i < bank.size(); ++i) {
      for (double v : bank[i]) CHECK((v >= 0.0 && v <= static_cast<double>(c.horizon)));
    }
  }
}
