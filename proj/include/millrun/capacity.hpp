#pragma once

#include <optional>
#include <string>
#include <vector>

#include "millrun/core_model.hpp"

namespace millrun::capacity {

/// Monthly capacity as an affine function of the number of startups.
struct CapacityProfile {
	double nominal_kg = 0.0;        // C_N
	double loss_per_start_kg = 0.0; // Delta C(1)

	double available(long long startups) const;
};

/// monthly_hours * sum of net rates.
double nominalCapacity(const PlantConfig& plant);

/// Startup loss for n startups using plant.loss_formula. Throws for n < 0.
double capacityLoss(const PlantConfig& plant, long long startups);
double capacityLoss(const PlantConfig& plant, long long startups, LossFormula formula);

CapacityProfile capacityProfile(const PlantConfig& plant);

struct CapacityRow {
	long long startups;
	double available_kg;
	std::optional<double> required_max_kg;
	bool sufficient; // true when no demand was given
};

struct CapacityReport {
	double nominal_kg;
	double loss_per_start_kg;
	std::optional<double> max_demand_kg;
	std::vector<CapacityRow> rows;
	std::string verdict;
};

/// Available capacity for each n in [n_min, n_max] against the largest
/// monthly demand (when given).
CapacityReport capacityReport(const PlantConfig& plant, const std::vector<double>& monthly_demands,
                              long long n_min, long long n_max);

} // namespace millrun::capacity
