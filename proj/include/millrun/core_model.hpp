#pragma once

#include <string>
#include <vector>

namespace millrun {

/// Extrusion line. Rates in kg/hour, startup in hours.
class Machine {
public:
	Machine(int id, double nominal_rate, double efficiency, double scrap, double startup_hours);

	int id() const { return id_; }
	double nominalRate() const { return nominal_rate_; }
	double efficiency() const { return efficiency_; }
	double scrap() const { return scrap_; }
	double startupHours() const { return startup_hours_; }

private:
	int id_;
	double nominal_rate_;
	double efficiency_;
	double scrap_;
	double startup_hours_;
};

/// Customer order. Ids are 1-based and define the processing sequence.
class Order {
public:
	Order(int id, double quantity_kg, double due_days);

	int id() const { return id_; }
	double quantity() const { return quantity_kg_; }
	double dueDays() const { return due_days_; }

private:
	int id_;
	double quantity_kg_;
	double due_days_;
};

enum class LossFormula {
	AsWritten, // n * (1/m) * sum(tau) * sum(s)
	Prose      // n * mean(tau) * mean(s)
};

/// Plant-wide configuration. Construct through PlantConfig::make so the
/// invariants are checked once.
struct PlantConfig {
	std::vector<Machine> machines;
	double hours_per_day = 8.0;
	double warehouse_capacity_kg = 0.0;
	double pallet_kg = 0.0; // 0 when the capacity was given directly in kg
	double monthly_hours = 176.0;
	double slack_epsilon = 1e-6;       // hours; realizes the strict inequalities
	bool ties_interact = true;         // equal finish times count as warehouse interaction
	LossFormula loss_formula = LossFormula::AsWritten;

	/// Throws std::invalid_argument when any field is out of range.
	void validate() const;

	static PlantConfig make(std::vector<Machine> machines, double hours_per_day, double warehouse_capacity_kg,
	                        double monthly_hours = 176.0);

	/// Capacity given in pallets: A = pallets * pallet_kg.
	static PlantConfig withPallets(std::vector<Machine> machines, double hours_per_day, double pallets,
	                               double pallet_kg, double monthly_hours = 176.0);
};

/// tau = t * e * (1 - m)
double netRate(const Machine& machine);

/// s + Q / tau, in hours.
double processingTime(const Order& order, const Machine& machine);

/// Checks ids are unique and contiguous from 1 in vector order.
void validateOrderSequence(const std::vector<Order>& orders);

std::string toString(LossFormula formula);
LossFormula lossFormulaFromString(const std::string& text);

} // namespace millrun
