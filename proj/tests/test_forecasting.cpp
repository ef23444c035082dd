#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "instances.hpp"
#include "naive_forecast.hpp"
#include "millrun/forecasting.hpp"

using namespace millrun::forecast;
using millrun::testing::identity;
namespace naive = millrun::testing::naive;

namespace {

std::vector<double> alternating(std::size_t n) {
	std::vector<double> y(n);
	for (std::size_t i = 0; i < n; ++i) {
		y[i] = i % 2 == 0 ? 100.0 : 200.0;
	}
	return y;
}

} // namespace

TEST_CASE("mape examples") {
	const std::vector<double> a{100, 200};
	const std::vector<double> f{110, 180};
	CHECK(mape(a, f) == doctest::Approx(0.10));
	CHECK(mape(a, a) == 0.0);
	const std::vector<double> one{100};
	const std::vector<double> zero{0};
	CHECK(mape(one, zero) == 1.0);
	CHECK_THROWS_AS(mape(zero, one), std::invalid_argument);
	CHECK_THROWS_AS(mape(a, one), std::invalid_argument);
}

TEST_CASE("mape is scale invariant") {
	for (std::uint64_t seed = 0; seed < 20; ++seed) {
		const auto y = millrun::testing::ar1Series(seed, 24);
		const auto f = millrun::testing::ar1Series(seed + 100, 24);
		const double c = 0.37 + static_cast<double>(seed);
		std::vector<double> ys = y, fs = f;
		for (auto& v : ys) v *= c;
		for (auto& v : fs) v *= c;
		CHECK(std::abs(mape(ys, fs) - mape(y, f)) <= 1e-12);
	}
}

TEST_CASE("constant series gives zero error for the mean") {
	const std::vector<double> y(12, 100.0);
	const auto r = fitForecast(y, ModelSpec::mean());
	CHECK(r.mape == 0.0);
	CHECK(r.scored == 11);
	CHECK_FALSE(r.fitted[0].has_value());

	SUBCASE("ses converges immediately on constant data") {
		const auto s = fitForecast(y, ModelSpec::ses(0.3));
		for (std::size_t t = 1; t < y.size(); ++t) {
			CHECK(*s.fitted[t] == 100.0);
		}
	}
}

TEST_CASE("moving average on an alternating series") {
	const auto y = alternating(12);
	const auto r = fitForecast(y, ModelSpec::movingAverage(2));
	for (std::size_t t = 2; t < y.size(); ++t) {
		CHECK(*r.fitted[t] == 150.0);
	}
	CHECK(r.scored == 10);
	CHECK(r.mape == doctest::Approx(0.375));
}

TEST_CASE("ses near one approaches the naive forecast") {
	const auto y = millrun::testing::ar1Series(3, 36);
	std::vector<double> naive_f(y.begin(), y.end() - 1);
	const std::vector<double> actual(y.begin() + 1, y.end());
	const double naive_mape = mape(actual, naive_f);
	const auto r = fitForecast(y, ModelSpec::ses(0.99));
	CHECK(std::abs(r.mape - naive_mape) < 0.01 * naive_mape);
	CHECK(std::abs(fitForecast(y, ModelSpec::ses(0.9999)).mape - naive_mape) < 1e-3 * naive_mape);
}

TEST_CASE("model spec validation") {
	CHECK_THROWS_AS(ModelSpec::ses(1.0), std::invalid_argument);
	CHECK_THROWS_AS(ModelSpec::ses(0.0), std::invalid_argument);
	CHECK_THROWS_AS(ModelSpec::movingAverage(1), std::invalid_argument);
	CHECK_THROWS_AS(ModelSpec::movingAverage(24), std::invalid_argument);
	CHECK_THROWS_AS(ModelSpec::holt(0.5, 1.5), std::invalid_argument);
	CHECK_THROWS_AS(ModelSpec::winters(0.5, 0.5, 0.5, 1), std::invalid_argument);
	ModelSpec stray = ModelSpec::mean();
	stray.alpha = 0.3;
	CHECK_THROWS_AS(stray.validate(), std::invalid_argument);
	CHECK((modelKindFromString("holt") == ModelKind::Holt));
	CHECK_THROWS_AS(modelKindFromString("arima"), std::invalid_argument);
}

TEST_CASE("insufficient history names the minimum") {
	const std::vector<double> y(5, 10.0);
	try {
		fitForecast(y, ModelSpec::movingAverage(5));
		FAIL("expected an error");
	} catch (const std::invalid_argument& e) {
		CHECK(std::string(e.what()).find("at least 6") != std::string::npos);
	}
	const std::vector<double> two_years(24, 10.0);
	CHECK_THROWS_AS(fitForecast(two_years, ModelSpec::winters(0.5, 0.5, 0.5)), std::invalid_argument);
	const std::vector<double> enough(25, 10.0);
	CHECK_NOTHROW(fitForecast(enough, ModelSpec::winters(0.5, 0.5, 0.5)));
}

TEST_CASE("zero actuals are skipped with a warning") {
	std::vector<double> y{100, 100, 0, 100, 100};
	const auto r = fitForecast(y, ModelSpec::ses(0.5));
	CHECK(r.scored == 3);
	CHECK(r.warnings.size() == 1);
	CHECK_THROWS_AS(fitForecast(y, ModelSpec::winters(0.5, 0.5, 0.5, 2)), std::invalid_argument);
}

TEST_CASE("forecasts are causal") {
	const auto y = millrun::testing::ar1Series(11, 48);
	const std::vector<ModelSpec> specs{ModelSpec::mean(),          ModelSpec::movingAverage(4),
	                                   ModelSpec::ses(0.3),        ModelSpec::holt(0.4, 0.2),
	                                   ModelSpec::winters(0.3, 0.1, 0.4), ModelSpec::linearRegression()};
	for (const auto& spec : specs) {
		const auto base = oneStepForecasts(y, spec);
		for (std::size_t t = 0; t < y.size(); t += 5) {
			auto mutated = y;
			mutated[t] *= 1.7;
			const auto changed = oneStepForecasts(mutated, spec);
			for (std::size_t s = 0; s <= t; ++s) {
				CHECK(base[s] == changed[s]);
			}
		}
	}
}

TEST_CASE("linear trend ranks regression first") {
	std::vector<double> y(36);
	for (std::size_t i = 0; i < y.size(); ++i) {
		y[i] = 1000.0 + 25.0 * static_cast<double>(i);
	}
	const auto result = gridSearch(y);
	REQUIRE_FALSE(result.ranked.empty());
	CHECK((result.ranked.front().spec.kind == ModelKind::LinearRegression));
	CHECK(result.ranked.front().mape < 1e-12);
}

TEST_CASE("grid search matches an independent brute force") {
	for (std::uint64_t seed = 1; seed <= 10; ++seed) {
		const auto y = millrun::testing::ar1Series(seed, 48);
		const auto cells = naive::grid(y, 12);
		const auto result = gridSearch(y);
		REQUIRE(result.ranked.size() == cells.size());

		std::map<std::tuple<int, int, int, int, int>, double> oracle;
		for (const auto& c : cells) {
			oracle[{static_cast<int>(c.kind), c.k, c.a, c.g, c.d}] = c.mape;
		}
		REQUIRE(oracle.size() == cells.size());

		double previous = -1.0;
		for (const auto& r : result.ranked) {
			const auto it = oracle.find(identity(r.spec));
			REQUIRE(it != oracle.end());
			CHECK(std::abs(r.mape - it->second) <= 1e-12);
			// Oracle MAPEs must be non-decreasing along the library's ranking.
			CHECK(it->second >= previous - 1e-12);
			previous = it->second;
		}
		const double best = std::min_element(cells.begin(), cells.end(), [](auto& a, auto& b) {
			                    return a.mape < b.mape;
		                    })->mape;
		CHECK(std::abs(result.ranked.front().mape - best) <= 1e-12);
	}
}

TEST_CASE("parallel and serial grid search agree") {
	const auto y = millrun::testing::ar1Series(77, 40);
	const auto parallel = gridSearch(y);
	const auto serial = gridSearchSerial(y);
	REQUIRE(parallel.ranked.size() == serial.ranked.size());
	for (std::size_t i = 0; i < parallel.ranked.size(); ++i) {
		CHECK(parallel.ranked[i].spec == serial.ranked[i].spec);
		CHECK(parallel.ranked[i].mape == serial.ranked[i].mape);
	}
	CHECK(parallel.warnings == serial.warnings);
}

TEST_CASE("grid search is deterministic") {
	const auto y = millrun::testing::ar1Series(5, 30);
	const auto a = gridSearch(y);
	const auto b = gridSearch(y);
	REQUIRE(a.ranked.size() == b.ranked.size());
	for (std::size_t i = 0; i < a.ranked.size(); ++i) {
		CHECK(a.ranked[i].spec == b.ranked[i].spec);
		CHECK(a.ranked[i].mape == b.ranked[i].mape);
	}
}

TEST_CASE("short series drop unfittable rows with warnings") {
	const auto y = millrun::testing::ar1Series(2, 10);
	const auto result = gridSearch(y);
	const auto kinds = bestPerKind(result);
	CHECK(std::none_of(kinds.begin(), kinds.end(), [](auto& r) { return r.spec.kind == ModelKind::Winters; }));
	CHECK(result.warnings.size() >= 2);
	for (const auto& r : result.ranked) {
		if (r.spec.kind == ModelKind::MovingAverage) {
			CHECK(r.spec.window <= 9);
		}
	}
	const std::vector<double> one{5.0};
	CHECK_THROWS_AS(gridSearch(one), std::invalid_argument);
}

TEST_CASE("ranking prefers the simpler model on ties") {
	const std::vector<double> y(12, 50.0);
	const auto result = gridSearch(y);
	CHECK((result.ranked.front().spec.kind == ModelKind::Mean));
	const auto kinds = bestPerKind(result);
	CHECK(kinds.size() == 5);
	CHECK((kinds[1].spec.kind == ModelKind::LinearRegression));
	CHECK(kinds[2].spec.parameterCount() == 1);
}
