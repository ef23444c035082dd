#include "millrun/core_model.hpp"

#include <cmath>
#include <stdexcept>

namespace millrun {

namespace {

void require(bool condition, const std::string& message) {
	if (!condition) {
		throw std::invalid_argument(message);
	}
}

} // namespace

Machine::Machine(int id, double nominal_rate, double efficiency, double scrap, double startup_hours)
    : id_(id), nominal_rate_(nominal_rate), efficiency_(efficiency), scrap_(scrap), startup_hours_(startup_hours) {
	const std::string tag = "machine " + std::to_string(id) + ": ";
	require(std::isfinite(nominal_rate) && nominal_rate > 0.0, tag + "nominal rate must be > 0");
	require(std::isfinite(efficiency) && efficiency > 0.0 && efficiency <= 1.0, tag + "efficiency must be in (0,1]");
	require(std::isfinite(scrap) && scrap >= 0.0 && scrap < 1.0, tag + "scrap must be in [0,1)");
	require(std::isfinite(startup_hours) && startup_hours >= 0.0, tag + "startup must be finite and >= 0");
}

Order::Order(int id, double quantity_kg, double due_days) : id_(id), quantity_kg_(quantity_kg), due_days_(due_days) {
	const std::string tag = "order " + std::to_string(id) + ": ";
	require(std::isfinite(quantity_kg) && quantity_kg > 0.0, tag + "quantity must be > 0");
	require(std::isfinite(due_days) && due_days > 0.0, tag + "due date must be > 0");
}

void PlantConfig::validate() const {
	require(!machines.empty(), "plant: at least one machine is required");
	require(std::isfinite(hours_per_day) && hours_per_day > 0.0, "plant: hours_per_day must be > 0");
	require(std::isfinite(warehouse_capacity_kg) && warehouse_capacity_kg > 0.0,
	        "plant: warehouse capacity must be > 0");
	require(std::isfinite(pallet_kg) && pallet_kg >= 0.0, "plant: pallet_kg must be >= 0");
	require(std::isfinite(monthly_hours) && monthly_hours > 0.0, "plant: monthly_hours must be > 0");
	require(std::isfinite(slack_epsilon) && slack_epsilon >= 0.0, "plant: slack_epsilon must be >= 0");
	for (std::size_t a = 0; a < machines.size(); ++a) {
		for (std::size_t b = a + 1; b < machines.size(); ++b) {
			require(machines[a].id() != machines[b].id(),
			        "plant: duplicate machine id " + std::to_string(machines[a].id()));
		}
	}
}

PlantConfig PlantConfig::make(std::vector<Machine> machines, double hours_per_day, double warehouse_capacity_kg,
                              double monthly_hours) {
	PlantConfig plant;
	plant.machines = std::move(machines);
	plant.hours_per_day = hours_per_day;
	plant.warehouse_capacity_kg = warehouse_capacity_kg;
	plant.monthly_hours = monthly_hours;
	plant.validate();
	return plant;
}

PlantConfig PlantConfig::withPallets(std::vector<Machine> machines, double hours_per_day, double pallets,
                                     double pallet_kg, double monthly_hours) {
	require(std::isfinite(pallet_kg) && pallet_kg > 0.0, "plant: pallet_kg must be > 0 for pallet capacities");
	require(std::isfinite(pallets) && pallets > 0.0, "plant: pallet count must be > 0");
	PlantConfig plant = make(std::move(machines), hours_per_day, pallets * pallet_kg, monthly_hours);
	plant.pallet_kg = pallet_kg;
	return plant;
}

double netRate(const Machine& machine) {
	return machine.nominalRate() * machine.efficiency() * (1.0 - machine.scrap());
}

double processingTime(const Order& order, const Machine& machine) {
	return machine.startupHours() + order.quantity() / netRate(machine);
}

void validateOrderSequence(const std::vector<Order>& orders) {
	for (std::size_t i = 0; i < orders.size(); ++i) {
		if (orders[i].id() != static_cast<int>(i) + 1) {
			throw std::invalid_argument("orders: ids must be contiguous from 1 in processing order; position " +
			                            std::to_string(i + 1) + " has id " + std::to_string(orders[i].id()));
		}
	}
}

std::string toString(LossFormula formula) {
	return formula == LossFormula::AsWritten ? "as_written" : "prose";
}

LossFormula lossFormulaFromString(const std::string& text) {
	if (text == "as_written" || text == "printed") {
		return LossFormula::AsWritten;
	}
	if (text == "prose") {
		return LossFormula::Prose;
	}
	throw std::invalid_argument("unknown loss_formula '" + text + "' (expected as_written|prose)");
}

} // namespace millrun
