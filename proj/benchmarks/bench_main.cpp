// Throughput of the hot paths: LSS hashing, simulation, SMC evaluation,
// interval computation, hull/hypervolume and the exact oracle.
#include <benchmark/benchmark.h>

#include <random>

#include "mosmc/generators.hpp"
#include "mosmc/geometry.hpp"
#include "mosmc/oracle.hpp"
#include "mosmc/smc.hpp"
#include "mosmc/statistics.hpp"

namespace {

using namespace mosmc;

void BM_LssHash(benchmark::State& state) {
  std::uint32_t s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lss_hash(StrategyId{12345}, s++));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LssHash);

void BM_SimulateExponential(benchmark::State& state) {
  const ModelFile file = gen_exponential(static_cast<unsigned>(state.range(0)));
  const Simulator sim(file.model, file.query("tradeoff"));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.run(StrategyId{7}, seed++));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulateExponential)->Arg(6)->Arg(12)->Arg(16);

void BM_SimulateDeepSea(benchmark::State& state) {
  const ModelFile file = gen_deep_sea(DeepSeaVariant::Probabilistic);
  const Simulator sim(file.model, file.query());
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.run(StrategyId{99}, seed++));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulateDeepSea);

void BM_SmcEvaluate(benchmark::State& state) {
  const ModelFile file = gen_exponential(10);
  const MultiQuery& query = file.query("reach");
  const Simulator sim(file.model, query);
  const SmcEngine engine(sim, SeedContext(1), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    StrategyRecord record{StrategyId{3}, {}, 0, 0, 0, {}};
    engine.evaluate(record, 0.99, RunCount{10'000}, Phase::Evaluation);
    benchmark::DoNotOptimize(record.box);
  }
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_SmcEvaluate)->Arg(1)->Arg(4)->UseRealTime();

void BM_ClopperPearson(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(clopper_pearson(x, n, 0.01));
    x = (x + 37) % (n + 1);
  }
}
BENCHMARK(BM_ClopperPearson)->Arg(100)->Arg(100'000);

std::vector<FrontCorner> random_points(std::size_t count) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<FrontCorner> pts;
  for (std::size_t i = 0; i < count; ++i) {
    pts.push_back({{u(rng), u(rng)}, StrategyId{static_cast<std::uint32_t>(i)}});
  }
  return pts;
}

void BM_ConvexFront(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)));
  const Direction dirs[] = {Direction::Max, Direction::Max};
  for (auto _ : state) {
    benchmark::DoNotOptimize(convex_front(pts, dirs, FrontKind::Under));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ConvexFront)->Arg(100)->Arg(10'000);

void BM_Hypervolume(benchmark::State& state) {
  const Direction dirs[] = {Direction::Max, Direction::Max};
  const FrontApproximation front = convex_front(random_points(10'000), dirs, FrontKind::Under);
  const double ref[] = {0.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypervolume(front, ref, dirs));
  }
}
BENCHMARK(BM_Hypervolume);

void BM_OracleExponential(benchmark::State& state) {
  const ModelFile file = gen_exponential(static_cast<unsigned>(state.range(0)));
  const MultiQuery& query = file.query("tradeoff");
  OracleOptions options;
  options.method = state.range(1) ? OracleMethod::WeightedSum : OracleMethod::Enumerate;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_pareto_front(file.model, query, options));
  }
}
BENCHMARK(BM_OracleExponential)->Args({3, 0})->Args({3, 1})->Args({8, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
