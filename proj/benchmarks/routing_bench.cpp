#include <benchmark/benchmark.h>

#include <random>

#include "conclab/classical_routing.hpp"
#include "conclab/grover.hpp"
#include "conclab/matching_oracle.hpp"
#include "conclab/quantum_routing.hpp"

using namespace conclab;

namespace {

Request completed_random_request(const Concentrator& conc, Rng& rng) {
  Request req(conc.inputs());
  while (req.active_count() < conc.outputs())
    req.set_active(
        std::uniform_int_distribution<int>(1, conc.inputs())(rng), true);
  return req;
}

int sqrt_of_pow2(int n) {
  int root = 1;
  while (root * root < n) root <<= 1;
  return root;
}

void BM_BuildFullTopology(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = sqrt_of_pow2(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_full_fat_slim(n, m, AdjacencyStorage::Formulaic));
  }
}
BENCHMARK(BM_BuildFullTopology)->Range(1 << 10, 1 << 20);

void BM_RouteFullClassical(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Concentrator conc =
      build_full_fat_slim(n, sqrt_of_pow2(n), AdjacencyStorage::Formulaic);
  Rng rng(1);
  const Request req = completed_random_request(conc, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(route_full_classical(conc, req));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_RouteFullClassical)->Range(1 << 10, 1 << 20)->Complexity();

void BM_RouteBoundedClassical(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Concentrator conc = build_bounded_fat_slim(
      n, 3 * n / 4, n / 4, AdjacencyStorage::Formulaic);
  Rng rng(2);
  Request req(n);
  while (req.active_count() < conc.capacity())
    req.set_active(std::uniform_int_distribution<int>(1, n)(rng), true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(route_bounded_classical(conc, req));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_RouteBoundedClassical)->Range(1 << 10, 1 << 20)->Complexity();

void BM_RouteRegularClassical(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = sqrt_of_pow2(n);
  const Concentrator conc =
      build_regular_fat_slim(n / m, m, AdjacencyStorage::Formulaic);
  Rng rng(3);
  const Request req = completed_random_request(conc, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(route_regular_classical(conc, req));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_RouteRegularClassical)->Range(1 << 10, 1 << 20)->Complexity();

void BM_MaxMatching(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Concentrator conc = build_full_fat_slim(n, sqrt_of_pow2(n));
  Rng rng(4);
  const Request req = completed_random_request(conc, rng);
  const std::vector<int> actives = req.active_list();
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_matching(conc, actives));
  }
}
BENCHMARK(BM_MaxMatching)->Range(1 << 6, 1 << 12);

void BM_GroverIterate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Oracle oracle(n);
  for (int i = 0; i < sqrt_of_pow2(n); ++i) oracle.mark(i);
  Amplitudes amps = Amplitudes::uniform(n);
  for (auto _ : state) {
    grover_iterate(amps, oracle);
    benchmark::DoNotOptimize(amps.v.data());
  }
}
BENCHMARK(BM_GroverIterate)->Range(1 << 8, 1 << 18);

void BM_StatevectorFindAll(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  StatevectorEngine engine;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    Oracle oracle(n);
    for (int i = 0; i < sqrt_of_pow2(n); ++i) oracle.mark(i * 3 + 1);
    benchmark::DoNotOptimize(find_all_marked(engine, oracle, rng, 0.01));
  }
}
BENCHMARK(BM_StatevectorFindAll)->Range(1 << 6, 1 << 12);

void BM_CostModelFindAll(benchmark::State& state) {
  static const CalibrationTable table = run_calibration(
      {.min_domain = 4, .max_domain = 1024, .trials = 200, .seed = 1}, 0);
  CostModelEngine engine(table);
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    Oracle oracle(n);
    for (int i = 0; i < sqrt_of_pow2(n); ++i) oracle.mark(i * 3 + 1);
    benchmark::DoNotOptimize(find_all_marked(engine, oracle, rng, 0.01));
  }
}
BENCHMARK(BM_CostModelFindAll)->Range(1 << 10, 1 << 20);

}  // namespace

BENCHMARK_MAIN();
