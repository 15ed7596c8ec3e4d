#include <doctest.h>

#include <cmath>
#include <limits>

#include "modsel/hypothesis.hpp"
#include "modsel/planning.hpp"

using namespace modsel;

namespace {

HypothesisFunction constant(std::size_t n, double v) { return {std::vector<double>(n, v)}; }

}  // namespace

TEST_CASE("verify_nesting") {
  const HypothesisFunction fa{{0.1, 0.2}};
  const HypothesisFunction fb{{0.3, 0.4}};

  SUBCASE("literal subset") {
    FunctionFamily family{{{fa}, {fa, fb}}, 1, 0.0, 0.0};
    CHECK(verify_nesting(family, fa));
  }
  SUBCASE("member missing from the next class") {
    FunctionFamily family{{{fa}, {fb}}, 1, 0.0, 0.0};
    CHECK_FALSE(verify_nesting(family, fa));
  }
  SUBCASE("truth already in an earlier class") {
    FunctionFamily family{{{fa}, {fa, fb}}, 2, 0.0, 0.0};
    CHECK_FALSE(verify_nesting(family, fa));
  }
  SUBCASE("no classes") {
    FunctionFamily family;
    CHECK_THROWS_AS(verify_nesting(family, fa), ConfigError);
  }
  SUBCASE("nesting is transitive") {
    const HypothesisFunction fc{{0.5, 0.6}};
    FunctionFamily family{{{fa}, {fa, fb}, {fc, fb, fa}}, 1, 0.0, 0.0};
    REQUIRE(verify_nesting(family, fa));
    for (const auto& f : family.at(1)) CHECK(contains(std::span<const HypothesisFunction>(family.largest()), f));
    CHECK(family.member_indices(2) == std::vector<std::size_t>{2, 1});
  }
}

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(TransitionKernel(2, 1, {0.5, 0.6, 1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(TransitionKernel(2, 1, {1.5, -0.5, 1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(TransitionKernel(2, 1, {1.0, 0.0}), ConfigError);
  const std::size_t next[] = {1, 0};
  const auto p = TransitionKernel::deterministic(2, 1, next);
  CHECK(p.prob(0, 0, 1) == 1.0);
  CHECK(p.prob(1, 0, 0) == 1.0);
}

TEST_CASE("bandit separability") {
  const auto truth = constant(2, 0.5);

  SUBCASE("single rival at distance 0.4") {
    FunctionFamily family{{{constant(2, 0.9)}, {constant(2, 0.9), truth}}, 2, 0.4, 0.1};
    const auto report = verify_separability_bandit(family, truth);
    CHECK(report.holds);
    CHECK(report.achieved_gap == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(report.violations.empty());
  }
  SUBCASE("rival matching the truth on one action") {
    const HypothesisFunction g{{0.5, 0.9}};
    FunctionFamily family{{{g}, {g, truth}}, 2, 0.4, 0.1};
    const auto report = verify_separability_bandit(family, truth);
    CHECK_FALSE(report.holds);
    REQUIRE_FALSE(report.violations.empty());
    CHECK(report.violations.front().first == 0);
    CHECK(report.violations.front().second == 1);
    CHECK(report.achieved_gap == 0.0);
  }
  SUBCASE("no near pair") {
    const HypothesisFunction spread{{0.0, 1.0}};
    FunctionFamily family{{{constant(2, 0.2)}, {constant(2, 0.2), spread}}, 2, 0.4, 0.1};
    const auto report = verify_separability_bandit(family, spread);
    CHECK(report.holds);
    CHECK(std::isinf(report.achieved_gap));
  }
  SUBCASE("smallest class realizable") {
    FunctionFamily family{{{truth}}, 1, 0.4, 0.1};
    const auto report = verify_separability_bandit(family, truth);
    CHECK(report.holds);
    CHECK(report.achieved_gap == std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("kernel separability") {
  // Two states, one action. P* goes to state 0, the rival to state 1.
  const std::size_t to0[] = {0, 0};
  const std::size_t to1[] = {1, 1};
  const auto truth = TransitionKernel::deterministic(2, 1, to0);
  const auto rival = TransitionKernel::deterministic(2, 1, to1);
  KernelFamily family{{{rival}, {rival, truth}}, 2, 1.0, 0.05};

  SUBCASE("constant value vectors defeat every rival") {
    const std::vector<std::vector<double>> bank{{0.7, 0.7}};
    const auto report = verify_separability_mdp(family, truth, bank);
    CHECK_FALSE(report.holds);
    CHECK(report.achieved_gap == 0.0);
  }
  SUBCASE("indicator of the true successor") {
    const std::vector<std::vector<double>> bank{{1.0, 0.0}};
    const auto report = verify_separability_mdp(family, truth, bank);
    // (P*V) = 1 on both state-action pairs, (PV) = 0: one qualifying ordered
    // pair per direction, each with gap 1.
    CHECK(report.holds);
    CHECK(report.achieved_gap == 1.0);
  }
  SUBCASE("gap follows the value difference") {
    const std::vector<std::vector<double>> bank{{0.6, 0.1}};
    family.separation = 0.5;
    CHECK(verify_separability_mdp(family, truth, bank).achieved_gap == doctest::Approx(0.5));
    family.separation = 0.6;
    CHECK_FALSE(verify_separability_mdp(family, truth, bank).holds);
  }
  SUBCASE("empty bank") {
    CHECK_THROWS_AS(verify_separability_mdp(family, truth, {}), ConfigError);
  }
  SUBCASE("smallest class realizable") {
    KernelFamily single{{{truth}}, 1, 1.0, 0.05};
    const std::vector<std::vector<double>> bank{{0.7, 0.7}};
    CHECK(verify_separability_mdp(single, truth, bank).holds);
  }
}

TEST_CASE("metric_entropy") {
  CHECK(metric_entropy(1) == 0.0);
  CHECK(metric_entropy(8) == doctest::Approx(2.0794).epsilon(1e-4));
  CHECK(metric_entropy(8, 3.5) == 3.5);
  CHECK_THROWS_AS(metric_entropy(0), ConfigError);
  double last = -1.0;
  for (std::size_t n = 1; n < 64; ++n) {
    CHECK(metric_entropy(n) > last);
    last = metric_entropy(n);
  }
}
