#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "millrun/core_model.hpp"
#include "millrun/demand_analytics.hpp"

namespace millrun::scenario {

enum class SizeMode { EqualSplit, Dirichlet };

/// How a month of demand becomes discrete orders.
struct OrderGenerator {
	int count = 8;
	SizeMode sizes = SizeMode::EqualSplit;
	double concentration = 1.0; // dirichlet only
	int working_days = 22;      // due dates are distinct days in 1..working_days

	void validate() const;
};

struct WarehouseOption {
	double amount = 0.0;
	bool in_pallets = true;

	/// Capacity in kg; pallet options need pallet_kg > 0.
	double kilograms(double pallet_kg) const;
};

enum class SolverChoice { Auto, Oracle, Greedy, LocalSearch };

struct SolverSettings {
	SolverChoice choice = SolverChoice::Auto;
	std::uint64_t budget = 20'000;
	std::uint64_t oracle_limit = 100'000; // auto switches to local search above this
};

struct ScenarioSpec {
	std::vector<double> monthly_demands;
	std::vector<WarehouseOption> warehouse_options;
	OrderGenerator order_gen;
	std::uint64_t seed = 0;
	SolverSettings solver;

	void validate() const;
};

/// Splits one month into orders with ids in due-date order. Quantities sum to
/// month_demand; the same seed always yields the same orders.
std::vector<Order> segmentDemand(double month_demand, const OrderGenerator& gen, std::uint64_t seed);

/// Seed used for a sweep cell; depends on the demand value, not its row.
std::uint64_t cellSeed(std::uint64_t seed, double month_demand);

struct SolveSummary {
	std::size_t unserved = 0;
	double z_kg = 0.0;
	std::vector<int> assignment; // machine index per order, -1 when unserved
};

/// Solves one month at one capacity. `warm_start` is reused by local search.
SolveSummary solveMonth(const std::vector<Order>& orders, const PlantConfig& plant, const SolverSettings& solver,
                        std::uint64_t seed, const std::vector<int>* warm_start = nullptr);

struct SweepCell {
	int month = 0; // 1-based row
	double capacity_kg = 0.0;
	double demand_kg = 0.0;
	std::size_t unserved = 0;
	double z_kg = 0.0;
	std::optional<std::string> error; // set when the cell failed
};

/// Every (month, capacity) cell, ordered by month then by option order.
/// Months run in parallel; capacities within a month are solved in ascending
/// order and each warm-starts from the previous solution.
std::vector<SweepCell> warehouseSweep(const ScenarioSpec& spec, const PlantConfig& plant);

/// Serial reference of warehouseSweep.
std::vector<SweepCell> warehouseSweepSerial(const ScenarioSpec& spec, const PlantConfig& plant);

struct CriticalDemand {
	double demand_kg = 0.0;   // smallest demand found with >= 1 unserved order
	double served_below_kg = 0.0; // largest probed demand with every order served
	std::size_t probes = 0;
	std::vector<std::string> warnings;
};

struct CriticalSearch {
	double lower_kg = 1e4;
	double upper_kg = 1e7;
	double tolerance_kg = 1000.0;
	int scan_points = 64;
};

/// Scans the bracket geometrically, then bisects the first transition from
/// fully served to not fully served. Throws std::runtime_error("no critical
/// point in range") when the bracket has no such transition.
CriticalDemand criticalDemand(const PlantConfig& plant, double capacity_kg, const OrderGenerator& gen,
                              std::uint64_t seed, const SolverSettings& solver, const CriticalSearch& search = {});

/// Probability that monthly demand exceeds the critical value.
double serviceRisk(const analytics::NormalFit& fit, double critical_kg);

std::string toString(SizeMode mode);
SizeMode sizeModeFromString(const std::string& text);
std::string toString(SolverChoice choice);
SolverChoice solverChoiceFromString(const std::string& text);

} // namespace millrun::scenario
