#include <doctest.h>

#include "../support/oracles.hpp"
#include "modsel/eluder.hpp"
#include "modsel/rng.hpp"

using namespace modsel;

namespace {

TabularClass bumps(std::size_t n, bool with_zero) {
  TabularClass cls{n, {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> f(n, 0.0);
    f[i] = 1.0;
    cls.functions.push_back(f);
  }
  if (with_zero) cls.functions.emplace_back(n, 0.0);
  return cls;
}

/// Values on a quarter grid keep every squared sum exact.
TabularClass random_grid_class(Rng& rng, std::size_t domain, std::size_t n_functions) {
  TabularClass cls{domain, {}};
  for (std::size_t i = 0; i < n_functions; ++i) {
    std::vector<double> f(domain);
    for (auto& v : f) v = 0.25 * static_cast<double>(rng.index(5));
    cls.functions.push_back(f);
  }
  return cls;
}

}  // namespace

TEST_CASE("eluder dimension on small classes") {
  SUBCASE("singleton class") {
    TabularClass cls{3, {{0.1, 0.5, 0.9}}};
    for (double eps : {0.01, 0.5, 2.0}) CHECK(eluder_dimension(cls, eps).dimension == 0);
  }
  SUBCASE("two functions differing at one point") {
    TabularClass cls{4, {{0.0, 0.2, 0.2, 0.2}, {0.0, 0.2, 1.2, 0.2}}};
    const auto report = eluder_dimension(cls, 0.5);
    CHECK(report.dimension == 1);
    CHECK(report.witness == std::vector<std::size_t>{2});
    CHECK(oracle::eluder_dimension(cls.functions, 4, 0.5) == 1);
  }
  SUBCASE("bump functions") {
    for (std::size_t n = 1; n <= 5; ++n) {
      CAPTURE(n);
      const auto plain = bumps(n, false);
      const auto padded = bumps(n, true);
      CHECK(eluder_dimension(plain, 0.5).dimension == oracle::eluder_dimension(plain.functions, n, 0.5));
      CHECK(eluder_dimension(padded, 0.5).dimension == oracle::eluder_dimension(padded.functions, n, 0.5));
      CHECK(eluder_dimension(padded, 0.5).dimension == n);
      CHECK(eluder_dimension(plain, 0.5).dimension == (n == 1 ? 0 : n - 1));
    }
  }
  SUBCASE("restricted domain") {
    const auto cls = bumps(5, true);
    const std::size_t domain[] = {1, 3};
    const auto report = eluder_dimension(cls, 0.5, domain);
    CHECK(report.dimension == 2);
    for (std::size_t x : report.witness) CHECK((x == 1 || x == 3));
  }
  SUBCASE("bad arguments") {
    TabularClass cls{2, {{0.0, 1.0}}};
    CHECK_THROWS(eluder_dimension(cls, 0.0));
    TabularClass empty{2, {}};
    CHECK_THROWS(eluder_dimension(empty, 0.5));
  }
}

TEST_CASE("eluder witnesses replay and properties hold on random classes") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t domain = 1 + rng.index(6);
    const auto cls = random_grid_class(rng, domain, 1 + rng.index(4));
    const double eps = 0.1 + 0.1 * static_cast<double>(rng.index(5));
    CAPTURE(trial);
    const auto report = eluder_dimension(cls, eps);
    CHECK(report.exact);
    CHECK(report.dimension <= domain);
    CHECK(report.dimension == oracle::eluder_dimension(cls.functions, domain, eps));
    CHECK(oracle::is_independent(cls.functions, report.witness, eps));
    const auto scale = independence_scale(cls, report.witness, eps);
    REQUIRE(scale.has_value());
    CHECK(*scale >= eps);
    CHECK(independent_at_scale(cls, report.witness, report.scale));

    // Larger eps never lengthens the sequence; adding a function never shortens it.
    CHECK(eluder_dimension(cls, eps + 0.3).dimension <= report.dimension);
    auto bigger = cls;
    bigger.functions.push_back(random_grid_class(rng, domain, 1).functions.front());
    CHECK(eluder_dimension(bigger, eps).dimension >= report.dimension);
  }
}

TEST_CASE("replay rejects repeated points") {
  const auto cls = bumps(3, true);
  const std::size_t seq[] = {0, 0};
  CHECK_FALSE(independence_scale(cls, seq, 0.5).has_value());
  CHECK_FALSE(oracle::is_independent(cls.functions, {0, 0}, 0.5));
}

TEST_CASE("greedy search past the exhaustive cap") {
  const auto cls = bumps(8, true);
  const auto report = eluder_dimension(cls, 0.5, {}, EluderOptions{4});
  CHECK_FALSE(report.exact);
  CHECK(independent_at_scale(cls, report.witness, report.scale));
  CHECK(report.dimension <= 8);
}

TEST_CASE("induced value class") {
  const std::size_t to0[] = {0, 0};
  const auto det = TransitionKernel::deterministic(2, 1, to0);
  const TransitionKernel mixed(2, 1, {0.3, 0.7, 0.6, 0.4});

  SUBCASE("single kernel") {
    const std::vector<TransitionKernel> ks{det};
    const std::vector<std::vector<double>> bank{{1.0, 0.0}};
    CHECK(induced_value_class(ks, bank).functions.size() == 1);
  }
  SUBCASE("indicator values give next-state probabilities") {
    const std::vector<TransitionKernel> ks{det, mixed};
    const std::vector<std::vector<double>> bank{{0.0, 1.0}};
    const auto cls = induced_value_class(ks, bank);
    REQUIRE(cls.functions.size() == 2);
    CHECK(cls.domain_size == 2);
    CHECK(cls.functions[0] == std::vector<double>{0.0, 0.0});
    CHECK(cls.functions[1][0] == doctest::Approx(0.7));
    CHECK(cls.functions[1][1] == doctest::Approx(0.4));
  }
  SUBCASE("duplicates merge") {
    const std::vector<TransitionKernel> ks{mixed, det, mixed};
    const std::vector<std::vector<double>> bank{{0.0, 1.0}, {2.0, 0.5}};
    CHECK(induced_value_class(ks, bank).functions.size() == 2);
  }
}
