#include <random>

#include <benchmark/benchmark.h>

#include "seqalloc/mechanism.hpp"
#include "seqalloc/oracle.hpp"
#include "seqalloc/solvers.hpp"

using namespace seqalloc;

namespace {

Instance random_instance(int n, int m, Utility max_u, std::uint64_t seed,
                         bool shared_ranking = false) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Utility> du(0, max_u);
  std::vector<std::vector<Utility>> u(n, std::vector<Utility>(m));
  for (auto& row : u) {
    for (auto& x : row) x = du(rng);
    if (shared_ranking) std::sort(row.rbegin(), row.rend());
  }
  std::vector<std::string> labels;
  for (int j = 0; j < m; ++j) labels.push_back("i" + std::to_string(j + 1));
  return Instance(n, labels, u);
}

void BM_Simulate(benchmark::State& state) {
  const int n = 4, m = static_cast<int>(state.range(0));
  const auto inst = random_instance(n, m, 100, 1);
  Policy p;
  for (int i = 0; i < m; ++i) p.turns.push_back(i % n);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(inst, p));
  state.SetComplexityN(m);
}
BENCHMARK(BM_Simulate)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_ImproveAllocation(benchmark::State& state) {
  const int n = 4, m = static_cast<int>(state.range(0));
  const auto inst = random_instance(n, m, 100, 2);
  Allocation a{std::vector<int>(m)};
  for (int j = 0; j < m; ++j) a.owner[j] = (j * 7) % n;
  for (auto _ : state) benchmark::DoNotOptimize(improve_allocation(inst, a));
}
BENCHMARK(BM_ImproveAllocation)->RangeMultiplier(4)->Range(16, 1024);

void BM_MaxUtilitarianBalanced(benchmark::State& state) {
  const int n = 4, m = static_cast<int>(state.range(0));
  const auto inst = random_instance(n, m, 100, 3);
  for (auto _ : state) benchmark::DoNotOptimize(max_utilitarian_balanced(inst));
}
BENCHMARK(BM_MaxUtilitarianBalanced)->RangeMultiplier(2)->Range(8, 256);

void BM_TwoAgentBalancedEgalitarian(benchmark::State& state) {
  const auto inst = random_instance(2, static_cast<int>(state.range(0)), 9, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(two_agent_balanced_max(inst, Objective::kEgalitarian));
}
BENCHMARK(BM_TwoAgentBalancedEgalitarian)->DenseRange(8, 32, 8);

void BM_TwoAgentRbIdentical(benchmark::State& state) {
  const auto inst = random_instance(2, static_cast<int>(state.range(0)), 9, 5, true);
  for (auto _ : state)
    benchmark::DoNotOptimize(two_agent_rb_identical_max(inst, Objective::kEgalitarian));
}
BENCHMARK(BM_TwoAgentRbIdentical)->DenseRange(8, 64, 8);

void BM_HouseAllocationMax(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = random_instance(n, n, 50, 6);
  for (auto _ : state) benchmark::DoNotOptimize(house_allocation_max_egalitarian(inst));
}
BENCHMARK(BM_HouseAllocationMax)->RangeMultiplier(2)->Range(4, 64);

void BM_OracleAll(benchmark::State& state) {
  const auto inst = random_instance(3, static_cast<int>(state.range(0)), 9, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::brute_force_optimum(
        inst, PolicyClass::kAll, Objective::kEgalitarian, Direction::kMax));
  }
}
BENCHMARK(BM_OracleAll)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto inst = random_instance(4, 16, 9, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::monte_carlo_ba(inst, Objective::kUtilitarian, 20,
                                                    static_cast<std::uint64_t>(state.range(0)), 1));
  }
}
BENCHMARK(BM_MonteCarlo)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
