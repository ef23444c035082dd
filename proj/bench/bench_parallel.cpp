// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "instances.hpp"
#include "millrun/forecasting.hpp"
#include "millrun/scenario.hpp"
#include "millrun/solvers.hpp"

namespace {

using namespace millrun;

void BM_GridSearchParallel(benchmark::State& state) {
	const auto series = testing::ar1Series(7, static_cast<std::size_t>(state.range(0)));
	for (auto _ : state) {
		benchmark::DoNotOptimize(forecast::gridSearch(series));
	}
}

void BM_GridSearchSerial(benchmark::State& state) {
	const auto series = testing::ar1Series(7, static_cast<std::size_t>(state.range(0)));
	for (auto _ : state) {
		benchmark::DoNotOptimize(forecast::gridSearchSerial(series));
	}
}

void BM_OracleParallel(benchmark::State& state) {
	const auto inst = testing::randomInstance(11, static_cast<std::size_t>(state.range(0)), 3);
	for (auto _ : state) {
		benchmark::DoNotOptimize(solve::solveExhaustive(inst.orders, inst.plant));
	}
}

void BM_OracleSerial(benchmark::State& state) {
	const auto inst = testing::randomInstance(11, static_cast<std::size_t>(state.range(0)), 3);
	for (auto _ : state) {
		benchmark::DoNotOptimize(solve::solveExhaustiveSerial(inst.orders, inst.plant));
	}
}

scenario::ScenarioSpec sweepSpec() {
	scenario::ScenarioSpec spec;
	spec.monthly_demands = {435536, 342621, 294082, 326342, 410814, 377721,
	                        351338, 491975, 424908, 535150, 343411, 430795};
	spec.warehouse_options = {{84, true}, {144, true}};
	spec.order_gen.count = 6;
	spec.seed = 3;
	return spec;
}

PlantConfig sweepPlant() {
	std::vector<Machine> machines{{1, 1200, 0.9, 0.03, 12}, {2, 1100, 0.9, 0.03, 12},
	                              {3, 1000, 0.92, 0.04, 12}, {4, 900, 0.95, 0.05, 12}};
	return PlantConfig::withPallets(std::move(machines), 24.0, 84, 1000.0);
}

void BM_SweepParallel(benchmark::State& state) {
	const auto spec = sweepSpec();
	const auto plant = sweepPlant();
	for (auto _ : state) {
		benchmark::DoNotOptimize(scenario::warehouseSweep(spec, plant));
	}
}

void BM_SweepSerial(benchmark::State& state) {
	const auto spec = sweepSpec();
	const auto plant = sweepPlant();
	for (auto _ : state) {
		benchmark::DoNotOptimize(scenario::warehouseSweepSerial(spec, plant));
	}
}

} // namespace

BENCHMARK(BM_GridSearchParallel)->Arg(36)->Arg(72)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSearchSerial)->Arg(36)->Arg(72)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleSerial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
