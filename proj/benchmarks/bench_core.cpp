#include <benchmark/benchmark.h>

#include "modsel/bandit.hpp"
#include "modsel/eluder.hpp"
#include "modsel/generators.hpp"
#include "modsel/mdp.hpp"

using namespace modsel;

namespace {

TransitionKernel random_kernel(std::size_t S, std::size_t A, Rng& rng) {
  std::vector<double> probs(S * A * S);
  for (std::size_t row = 0; row < S * A; ++row) {
    double total = 0.0;
    for (std::size_t t = 0; t < S; ++t) total += probs[row * S + t] = rng.uniform();
    for (std::size_t t = 0; t < S; ++t) probs[row * S + t] /= total;
  }
  return {S, A, std::move(probs)};
}

void BM_ValueIteration(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  const std::size_t A = 4, H = 10;
  Rng rng(1);
  const auto p = random_kernel(S, A, rng);
  RewardTable r{S, A, std::vector<double>(S * A)};
  for (auto& v : r.values) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(p, r, H));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ValueIteration)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_EluderExhaustive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  TabularClass cls{n, {}};
  for (int f = 0; f < 6; ++f) {
    std::vector<double> v(n);
    for (auto& x : v) x = 0.25 * static_cast<double>(rng.index(5));
    cls.functions.push_back(v);
  }
  for (auto _ : state) benchmark::DoNotOptimize(eluder_dimension(cls, 0.2));
}
BENCHMARK(BM_EluderExhaustive)->DenseRange(4, 12, 2);

void BM_BanditLearnerRound(benchmark::State& state) {
  BanditGenConfig c;
  c.class_sizes = {2, 4, static_cast<std::size_t>(state.range(0))};
  const auto inst = gen_bandit_instance(c);
  BanditLearner learner(inst.family().largest(), inst.n_actions(), 0.1, inst.sigma());
  Rng rng(3);
  for (auto _ : state) {
    const auto choice = learner.choose();
    learner.observe(choice.action, sample_reward(inst, choice.action, rng));
  }
}
BENCHMARK(BM_BanditLearnerRound)->Arg(32)->Arg(320);

void BM_AblRun(benchmark::State& state) {
  BanditGenConfig c;
  c.class_sizes = {2, 4, 320};
  const auto inst = gen_bandit_instance(c);
  const auto T = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(abl_run(inst, T, 0.1, 0.25, rng));
  }
}
BENCHMARK(BM_AblRun)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ArlRun(benchmark::State& state) {
  MdpGenConfig c;
  c.horizon = 2;
  const auto inst = gen_mdp_instance(c);
  const auto K = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(arl_run(inst, K, 0.1, 0.25, rng));
  }
}
BENCHMARK(BM_ArlRun)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
