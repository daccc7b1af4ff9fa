#include <benchmark/benchmark.h>

#include <hjgraph/hjgraph.hpp>

namespace {

hjg::Problem instance(std::int64_t nodes, hjg::FamilyMix mix = hjg::FamilyMix::Entropic) {
  hjg::RandomInstanceSpec spec;
  spec.nodes = static_cast<std::size_t>(nodes);
  spec.families = mix;
  return hjg::random_problem(spec, 1);
}

void BM_SolveFiniteHorizon(benchmark::State& state) {
  const auto p = instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hjg::solve_finite_horizon(p));
}
BENCHMARK(BM_SolveFiniteHorizon)->Arg(2)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SolveStationary(benchmark::State& state) {
  const auto p = instance(state.range(0), hjg::FamilyMix::Mixed);
  for (auto _ : state) benchmark::DoNotOptimize(hjg::solve_stationary(p.model, 0.1));
}
BENCHMARK(BM_SolveStationary)->Arg(2)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_VanishingDiscount(benchmark::State& state) {
  const auto p = instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hjg::solve_ergodic_vanishing_discount(p.model));
}
BENCHMARK(BM_VanishingDiscount)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ErgodicDirect(benchmark::State& state) {
  const auto p = instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hjg::solve_ergodic_direct(p.model));
}
BENCHMARK(BM_ErgodicDirect)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto p = instance(4);
  const auto policy = hjg::extract_policy(p, hjg::solve_finite_horizon(p));
  hjg::SimulationOptions options;
  options.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hjg::simulate(p, policy, 0, static_cast<std::size_t>(state.range(0)), 7, options));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
