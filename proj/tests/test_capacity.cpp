#include <doctest.h>

#include <stdexcept>

#include "instances.hpp"
#include "millrun/capacity.hpp"

using namespace millrun;
using namespace millrun::capacity;

namespace {

// Net rate equals nominal rate when efficiency is 1 and scrap is 0.
PlantConfig plantWithRates(const std::vector<double>& rates, double startup = 12.0, double monthly_hours = 176.0) {
	std::vector<Machine> machines;
	for (std::size_t j = 0; j < rates.size(); ++j) {
		machines.emplace_back(static_cast<int>(j) + 1, rates[j], 1.0, 0.0, startup);
	}
	return PlantConfig::make(std::move(machines), 8, 1000, monthly_hours);
}

} // namespace

TEST_CASE("nominal capacity") {
	CHECK(nominalCapacity(plantWithRates({100, 100, 100, 100})) == doctest::Approx(70400));
	CHECK(nominalCapacity(plantWithRates({1}, 0, 1)) == doctest::Approx(1));

	auto mixed = plantWithRates({90, 100, 120});
	mixed.machines.insert(mixed.machines.begin(), Machine(9, 100, 0.9, 0.05, 12));
	CHECK(nominalCapacity(mixed) == doctest::Approx(69608));
}

TEST_CASE("startup loss, as written and prose readings") {
	const auto plant = plantWithRates({100, 100, 100, 100});
	CHECK(capacityLoss(plant, 0) == 0.0);
	CHECK(capacityLoss(plant, 1) == doctest::Approx(4800));
	CHECK(capacityLoss(plant, 1, LossFormula::Prose) == doctest::Approx(1200));
	CHECK(capacityLoss(plant, 2) == doctest::Approx(2 * capacityLoss(plant, 1)));
	CHECK_THROWS_AS(capacityLoss(plant, -1), std::invalid_argument);

	auto prose = plant;
	prose.loss_formula = LossFormula::Prose;
	CHECK(capacityLoss(prose, 3) == doctest::Approx(3600));
}

TEST_CASE("capacity algebra over random plants") {
	for (std::uint64_t seed = 0; seed < 100; ++seed) {
		const auto plant = testing::randomInstance(seed, 3, 1 + seed % 5).plant;
		const double m = static_cast<double>(plant.machines.size());
		const auto profile = capacityProfile(plant);
		CHECK(profile.available(0) == nominalCapacity(plant));
		for (long long n = 0; n < 50; n += 7) {
			CHECK(profile.available(n) == doctest::Approx(nominalCapacity(plant) - capacityLoss(plant, n)));
			const double second = profile.available(n + 2) - 2 * profile.available(n + 1) + profile.available(n);
			CHECK(std::abs(second) <= 1e-9 * nominalCapacity(plant));
			CHECK(capacityLoss(plant, n + 5) == doctest::Approx(capacityLoss(plant, n) + capacityLoss(plant, 5)));
			CHECK(capacityLoss(plant, n, LossFormula::Prose) ==
			      doctest::Approx(capacityLoss(plant, n, LossFormula::AsWritten) / m));
			if (profile.loss_per_start_kg > 0) {
				CHECK(profile.available(n + 1) < profile.available(n));
			}
		}
	}
}

TEST_CASE("capacity report verdicts") {
	const auto plant = plantWithRates({100, 100, 100, 100});
	SUBCASE("sufficient through the whole range") {
		// Loss per start is (1/4)(400)(0.4) = 40 kg.
		const auto quick = plantWithRates({100, 100, 100, 100}, 0.1);
		const auto report = capacityReport(quick, {50000, 60000}, 0, 100);
		CHECK(report.rows.size() == 101);
		CHECK(report.verdict == "capacity sufficient at 100 starts/month");
		CHECK(*report.max_demand_kg == 60000);
		CHECK(report.rows.back().available_kg == doctest::Approx(66400));
	}
	SUBCASE("a single machine below demand") {
		const auto single = plantWithRates({100});
		const auto report = capacityReport(single, {20000}, 0, 10);
		CHECK(report.verdict == "insufficient at n=0");
		CHECK_FALSE(report.rows.front().sufficient);
	}
	SUBCASE("first shortfall is reported") {
		// 70,400 - 4,800 n >= 50,000 holds up to n = 4.
		const auto report = capacityReport(plant, {50000}, 0, 10);
		CHECK(report.verdict == "insufficient at n=5");
		CHECK(report.rows[4].sufficient);
		CHECK_FALSE(report.rows[5].sufficient);
	}
	SUBCASE("no demand") {
		const auto report = capacityReport(plant, {}, 0, 3);
		CHECK(report.verdict == "no demand supplied");
		CHECK_FALSE(report.rows[0].required_max_kg.has_value());
	}
	SUBCASE("empty range") {
		CHECK_THROWS_AS(capacityReport(plant, {1}, 5, 4), std::invalid_argument);
	}
}
