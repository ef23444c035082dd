#include "millrun/scenario.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "millrun/schedule_model.hpp"
#include "millrun/solvers.hpp"

namespace millrun::scenario {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

std::size_t countUnserved(const std::vector<int>& assignment) {
	return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), schedule::Assignment::kUnassigned));
}

std::vector<SweepCell> sweepMonth(const ScenarioSpec& spec, const PlantConfig& plant, std::size_t month) {
	const double demand = spec.monthly_demands[month];
	std::vector<SweepCell> cells(spec.warehouse_options.size());
	std::vector<std::size_t> by_capacity(cells.size());
	std::iota(by_capacity.begin(), by_capacity.end(), std::size_t{0});
	std::vector<double> capacities(cells.size());
	for (std::size_t a = 0; a < cells.size(); ++a) {
		capacities[a] = spec.warehouse_options[a].kilograms(plant.pallet_kg);
	}
	std::stable_sort(by_capacity.begin(), by_capacity.end(),
	                 [&](std::size_t x, std::size_t y) { return capacities[x] < capacities[y]; });

	const std::uint64_t seed = cellSeed(spec.seed, demand);
	std::optional<std::vector<Order>> orders;
	std::optional<std::string> segmentation_error;
	try {
		orders = segmentDemand(demand, spec.order_gen, seed);
	} catch (const std::exception& e) {
		segmentation_error = std::string("scenario: ") + e.what();
	}

	std::optional<std::vector<int>> previous;
	for (std::size_t a : by_capacity) {
		SweepCell& cell = cells[a];
		cell.month = static_cast<int>(month) + 1;
		cell.capacity_kg = capacities[a];
		cell.demand_kg = demand;
		if (segmentation_error) {
			cell.error = segmentation_error;
			continue;
		}
		try {
			PlantConfig cell_plant = plant;
			cell_plant.warehouse_capacity_kg = capacities[a];
			cell_plant.validate();
			SolveSummary summary =
			    solveMonth(*orders, cell_plant, spec.solver, seed, previous ? &*previous : nullptr);
			cell.unserved = summary.unserved;
			cell.z_kg = summary.z_kg;
			previous = std::move(summary.assignment);
		} catch (const std::exception& e) {
			cell.error = std::string("solver: ") + e.what();
		}
	}
	return cells;
}

} // namespace

void OrderGenerator::validate() const {
	if (count < 1) {
		throw std::invalid_argument("order generator: count must be >= 1");
	}
	if (working_days < 1) {
		throw std::invalid_argument("order generator: working_days must be >= 1");
	}
	if (count > working_days) {
		throw std::invalid_argument("order generator: " + std::to_string(count) +
		                            " orders cannot have distinct due dates within " + std::to_string(working_days) +
		                            " working days");
	}
	if (sizes == SizeMode::Dirichlet && !(std::isfinite(concentration) && concentration > 0.0)) {
		throw std::invalid_argument("order generator: dirichlet concentration must be > 0");
	}
}

double WarehouseOption::kilograms(double pallet_kg) const {
	if (!in_pallets) {
		return amount;
	}
	if (!(pallet_kg > 0.0)) {
		throw std::invalid_argument("warehouse option in pallets needs pallet_kg > 0 in the plant config");
	}
	return amount * pallet_kg;
}

void ScenarioSpec::validate() const {
	if (monthly_demands.empty()) {
		throw std::invalid_argument("scenario: at least one monthly demand is required");
	}
	for (std::size_t i = 0; i < monthly_demands.size(); ++i) {
		if (!(std::isfinite(monthly_demands[i]) && monthly_demands[i] > 0.0)) {
			throw std::invalid_argument("scenario: monthly demand " + std::to_string(i + 1) + " must be > 0");
		}
	}
	if (warehouse_options.empty()) {
		throw std::invalid_argument("scenario: at least one warehouse option is required");
	}
	for (const auto& option : warehouse_options) {
		if (!(std::isfinite(option.amount) && option.amount > 0.0)) {
			throw std::invalid_argument("scenario: warehouse capacities must be > 0");
		}
	}
	order_gen.validate();
}

std::uint64_t cellSeed(std::uint64_t seed, double month_demand) {
	return splitmix64(seed ^ splitmix64(std::bit_cast<std::uint64_t>(month_demand)));
}

std::vector<Order> segmentDemand(double month_demand, const OrderGenerator& gen, std::uint64_t seed) {
	gen.validate();
	if (!(std::isfinite(month_demand) && month_demand > 0.0)) {
		throw std::invalid_argument("segment demand: monthly demand must be > 0");
	}
	std::mt19937_64 rng(seed);
	const auto count = static_cast<std::size_t>(gen.count);

	std::vector<double> shares(count, 1.0 / static_cast<double>(count));
	if (gen.sizes == SizeMode::Dirichlet) {
		std::gamma_distribution<double> gamma(gen.concentration, 1.0);
		double total = 0.0;
		for (double& w : shares) {
			w = gamma(rng);
			total += w;
		}
		for (double& w : shares) {
			w /= total;
		}
	}
	// Whole kilograms, at least one per order; the largest share absorbs the
	// rounding so the month is conserved.
	if (month_demand < static_cast<double>(count)) {
		throw std::invalid_argument("segment demand: monthly demand is below one kilogram per order");
	}
	const std::size_t largest = static_cast<std::size_t>(std::max_element(shares.begin(), shares.end()) - shares.begin());
	const double spread = month_demand - static_cast<double>(count);
	std::vector<double> quantities(count);
	double assigned = 0.0;
	for (std::size_t i = 0; i < count; ++i) {
		if (i != largest) {
			quantities[i] = 1.0 + std::round(spread * shares[i]);
			assigned += quantities[i];
		}
	}
	quantities[largest] = month_demand - assigned;
	for (double q : quantities) {
		if (!(q > 0.0)) {
			throw std::runtime_error("segment demand: an order came out empty; use fewer orders or a higher concentration");
		}
	}

	// Distinct due days drawn without replacement, then sorted so ids follow due dates.
	std::vector<int> days(static_cast<std::size_t>(gen.working_days));
	std::iota(days.begin(), days.end(), 1);
	for (std::size_t i = 0; i < count; ++i) {
		const std::size_t j = i + static_cast<std::size_t>(rng() % (days.size() - i));
		std::swap(days[i], days[j]);
	}
	std::vector<int> due(days.begin(), days.begin() + static_cast<std::ptrdiff_t>(count));
	std::sort(due.begin(), due.end());

	std::vector<Order> orders;
	orders.reserve(count);
	for (std::size_t i = 0; i < count; ++i) {
		orders.emplace_back(static_cast<int>(i) + 1, quantities[i], static_cast<double>(due[i]));
	}
	return orders;
}

SolveSummary solveMonth(const std::vector<Order>& orders, const PlantConfig& plant, const SolverSettings& solver,
                        std::uint64_t seed, const std::vector<int>* warm_start) {
	SolverChoice choice = solver.choice;
	if (choice == SolverChoice::Auto) {
		choice = solve::searchSpaceSize(orders.size(), plant.machines.size()) <= solver.oracle_limit
		             ? SolverChoice::Oracle
		             : SolverChoice::LocalSearch;
	}
	solve::SolveResult result;
	switch (choice) {
	case SolverChoice::Oracle:
		result = solve::solveExhaustive(orders, plant, solver.oracle_limit);
		break;
	case SolverChoice::Greedy:
		result = solve::solveGreedy(orders, plant);
		break;
	default: {
		solve::LocalSearchOptions options;
		options.seed = seed;
		options.budget = solver.budget;
		if (warm_start) {
			options.warm_start = schedule::Assignment::fromChoices(*warm_start, plant.machines.size());
		}
		result = solve::solveLocalSearch(orders, plant, options);
		break;
	}
	}
	SolveSummary summary;
	summary.assignment = result.best_x.choices();
	summary.unserved = countUnserved(summary.assignment);
	summary.z_kg = result.best_eval.objective;
	return summary;
}

std::vector<SweepCell> warehouseSweepSerial(const ScenarioSpec& spec, const PlantConfig& plant) {
	spec.validate();
	std::vector<SweepCell> out;
	for (std::size_t month = 0; month < spec.monthly_demands.size(); ++month) {
		auto cells = sweepMonth(spec, plant, month);
		out.insert(out.end(), cells.begin(), cells.end());
	}
	return out;
}

std::vector<SweepCell> warehouseSweep(const ScenarioSpec& spec, const PlantConfig& plant) {
	spec.validate();
	const auto months = static_cast<std::ptrdiff_t>(spec.monthly_demands.size());
	std::vector<std::vector<SweepCell>> per_month(spec.monthly_demands.size());
#pragma omp parallel for schedule(dynamic, 1)
	for (std::ptrdiff_t month = 0; month < months; ++month) {
		per_month[static_cast<std::size_t>(month)] = sweepMonth(spec, plant, static_cast<std::size_t>(month));
	}
	std::vector<SweepCell> out;
	for (auto& cells : per_month) {
		out.insert(out.end(), cells.begin(), cells.end());
	}
	return out;
}

CriticalDemand criticalDemand(const PlantConfig& plant, double capacity_kg, const OrderGenerator& gen,
                              std::uint64_t seed, const SolverSettings& solver, const CriticalSearch& search) {
	if (!(search.lower_kg > 0.0 && search.upper_kg > search.lower_kg && search.tolerance_kg > 0.0 &&
	      search.scan_points >= 2)) {
		throw std::invalid_argument("critical demand: invalid search bracket");
	}
	PlantConfig cell_plant = plant;
	cell_plant.warehouse_capacity_kg = capacity_kg;
	cell_plant.validate();

	CriticalDemand result;
	// Same seed at every probe: orders only rescale, so due dates stay fixed.
	const auto unserved = [&](double demand) {
		++result.probes;
		return solveMonth(segmentDemand(demand, gen, seed), cell_plant, solver, seed).unserved;
	};

	const auto points = static_cast<std::size_t>(search.scan_points);
	const double ratio = std::pow(search.upper_kg / search.lower_kg, 1.0 / static_cast<double>(points - 1));
	std::vector<double> grid(points);
	std::vector<std::size_t> counts(points);
	for (std::size_t i = 0; i < points; ++i) {
		grid[i] = i + 1 == points ? search.upper_kg : search.lower_kg * std::pow(ratio, static_cast<double>(i));
		counts[i] = unserved(grid[i]);
	}

	const auto first_fail = std::find_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
	if (first_fail == counts.end() || first_fail == counts.begin()) {
		throw std::runtime_error("no critical point in range");
	}
	const auto f = static_cast<std::size_t>(first_fail - counts.begin());
	if (std::any_of(first_fail, counts.end(), [](std::size_t c) { return c == 0; })) {
		result.warnings.push_back("unserved count is not monotone in demand over the bracket; "
		                          "reporting the first transition");
	}

	double served = grid[f - 1];
	double failing = grid[f];
	while (failing - served > search.tolerance_kg) {
		const double mid = 0.5 * (served + failing);
		if (unserved(mid) > 0) {
			failing = mid;
		} else {
			served = mid;
		}
	}
	result.demand_kg = failing;
	result.served_below_kg = served;
	return result;
}

double serviceRisk(const analytics::NormalFit& fit, double critical_kg) {
	return analytics::tailProbability(fit, critical_kg);
}

std::string toString(SizeMode mode) {
	return mode == SizeMode::EqualSplit ? "equal" : "dirichlet";
}

SizeMode sizeModeFromString(const std::string& text) {
	if (text == "equal" || text == "equal-split" || text == "equal_split") {
		return SizeMode::EqualSplit;
	}
	if (text == "dirichlet" || text == "seeded-dirichlet") {
		return SizeMode::Dirichlet;
	}
	throw std::invalid_argument("unknown order size mode '" + text + "' (expected equal|dirichlet)");
}

std::string toString(SolverChoice choice) {
	switch (choice) {
	case SolverChoice::Auto:
		return "auto";
	case SolverChoice::Oracle:
		return "oracle";
	case SolverChoice::Greedy:
		return "greedy";
	case SolverChoice::LocalSearch:
		return "local";
	}
	return "auto";
}

SolverChoice solverChoiceFromString(const std::string& text) {
	if (text == "auto") {
		return SolverChoice::Auto;
	}
	switch (solve::methodFromString(text)) {
	case solve::Method::Oracle:
		return SolverChoice::Oracle;
	case solve::Method::Greedy:
		return SolverChoice::Greedy;
	case solve::Method::LocalSearch:
		return SolverChoice::LocalSearch;
	}
	return SolverChoice::Auto;
}

} // namespace millrun::scenario
