#include <random>

#include <benchmark/benchmark.h>

#include "semsim/transport.hpp"

namespace {

semsim::TransportProblem random_problem(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  semsim::TransportProblem p{std::vector<double>(m), std::vector<double>(n), semsim::Matrix(m, n)};
  const auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
  };
  for (auto& x : p.supply) x = unit(gen);
  for (auto& x : p.demand) x = unit(gen);
  normalize(p.supply);
  normalize(p.demand);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) p.cost(i, j) = unit(gen);
  return p;
}

void BM_SolveTransport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = random_problem(n, n, 42);
  for (auto _ : state) benchmark::DoNotOptimize(semsim::solve_transport(p).objective);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveTransport)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_RelaxedLowerBound(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = random_problem(n, n, 43);
  for (auto _ : state) benchmark::DoNotOptimize(semsim::relaxed_lower_bound(p));
}
BENCHMARK(BM_RelaxedLowerBound)->RangeMultiplier(4)->Range(4, 64);

}  // namespace
