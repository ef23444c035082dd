#include "millrun/capacity.hpp"

#include <algorithm>
#include <stdexcept>

namespace millrun::capacity {

namespace {

struct Sums {
	double rate = 0.0;
	double startup = 0.0;
	double machines = 0.0;
};

Sums plantSums(const PlantConfig& plant) {
	Sums sums;
	for (const auto& machine : plant.machines) {
		sums.rate += netRate(machine);
		sums.startup += machine.startupHours();
	}
	sums.machines = static_cast<double>(plant.machines.size());
	return sums;
}

} // namespace

double CapacityProfile::available(long long startups) const {
	return nominal_kg - static_cast<double>(startups) * loss_per_start_kg;
}

double nominalCapacity(const PlantConfig& plant) {
	return plant.monthly_hours * plantSums(plant).rate;
}

double capacityLoss(const PlantConfig& plant, long long startups, LossFormula formula) {
	if (startups < 0) {
		throw std::invalid_argument("capacity loss: startup count must be >= 0");
	}
	const Sums s = plantSums(plant);
	const double per_start = formula == LossFormula::AsWritten ? (1.0 / s.machines) * (s.rate * s.startup)
	                                                           : (s.rate / s.machines) * (s.startup / s.machines);
	return static_cast<double>(startups) * per_start;
}

double capacityLoss(const PlantConfig& plant, long long startups) {
	return capacityLoss(plant, startups, plant.loss_formula);
}

CapacityProfile capacityProfile(const PlantConfig& plant) {
	return {nominalCapacity(plant), capacityLoss(plant, 1)};
}

CapacityReport capacityReport(const PlantConfig& plant, const std::vector<double>& monthly_demands, long long n_min,
                              long long n_max) {
	if (n_min < 0 || n_max < n_min) {
		throw std::invalid_argument("capacity report: startup range must satisfy 0 <= n_min <= n_max");
	}
	CapacityReport report;
	const CapacityProfile profile = capacityProfile(plant);
	report.nominal_kg = profile.nominal_kg;
	report.loss_per_start_kg = profile.loss_per_start_kg;
	if (!monthly_demands.empty()) {
		report.max_demand_kg = *std::max_element(monthly_demands.begin(), monthly_demands.end());
	}

	std::optional<long long> first_short;
	for (long long n = n_min; n <= n_max; ++n) {
		CapacityRow row{n, profile.available(n), report.max_demand_kg, true};
		if (report.max_demand_kg) {
			row.sufficient = row.available_kg >= *report.max_demand_kg;
			if (!row.sufficient && !first_short) {
				first_short = n;
			}
		}
		report.rows.push_back(row);
	}

	if (!report.max_demand_kg) {
		report.verdict = "no demand supplied";
	} else if (first_short) {
		report.verdict = "insufficient at n=" + std::to_string(*first_short);
	} else {
		report.verdict = "capacity sufficient at " + std::to_string(n_max) + " starts/month";
	}
	return report;
}

} // namespace millrun::capacity
