#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "millrun/capacity.hpp"
#include "millrun/core_model.hpp"
#include "millrun/demand_analytics.hpp"
#include "millrun/forecasting.hpp"
#include "millrun/scenario.hpp"
#include "millrun/schedule_model.hpp"
#include "millrun/solvers.hpp"

namespace millrun::io {

/// Parse or format failure with file context.
class FormatError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Header-keyed CSV table. Cells are trimmed; empty cells are kept as "".
struct CsvTable {
	std::vector<std::string> header;
	std::vector<std::vector<std::string>> rows;

	/// Column index or nullopt.
	std::optional<std::size_t> column(const std::string& name) const;
};

CsvTable parseCsv(const std::string& text, const std::string& source);
CsvTable readCsv(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string formatNumber(double value);
double parseNumber(const std::string& text, const std::string& context);

std::string readFile(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over `path`.
void writeFileAtomic(const std::filesystem::path& path, const std::string& content);

// Inputs
std::vector<Machine> readMachines(const std::filesystem::path& path);
std::vector<Machine> parseMachines(const std::string& text, const std::string& source = "plant.csv");
/// Sorted by id; ids must be contiguous from 1.
std::vector<Order> readOrders(const std::filesystem::path& path);
std::vector<Order> parseOrders(const std::string& text, const std::string& source = "orders.csv");
analytics::DemandSeries readDemand(const std::filesystem::path& path);
analytics::DemandSeries parseDemand(const std::string& text, const std::string& source = "demand.csv");

/// Flat `key = value` file; `#` starts a comment.
/// Keys: h_per_day, monthly_hours, A_kg | A_pallets, pallet_kg,
/// slack_epsilon, ties_interact, loss_formula.
PlantConfig parsePlantConfig(const std::string& text, std::vector<Machine> machines,
                             const std::string& source = "plant.cfg");
PlantConfig readPlantConfig(const std::filesystem::path& path, std::vector<Machine> machines);

scenario::ScenarioSpec parseScenarioSpec(const nlohmann::json& doc);
scenario::ScenarioSpec readScenarioSpec(const std::filesystem::path& path);

// Reports
std::string capacityCsv(const capacity::CapacityReport& report);
std::vector<capacity::CapacityRow> parseCapacityCsv(const std::string& text);

std::string scenarioCsv(const std::vector<scenario::SweepCell>& cells);
std::vector<scenario::SweepCell> parseScenarioCsv(const std::string& text);

/// period,actual_kg,<one column per result>; blank where a forecast is undefined.
std::string fittedCsv(const std::vector<double>& actuals, const std::vector<forecast::BacktestResult>& results);

nlohmann::json toJson(const forecast::ModelSpec& spec);
forecast::ModelSpec modelSpecFromJson(const nlohmann::json& doc);
nlohmann::json toJson(const forecast::BacktestResult& result, bool include_fitted);
nlohmann::json forecastReport(const forecast::GridSearchResult& result, std::size_t top);

nlohmann::json toJson(const schedule::ScheduleEvaluation& eval);
nlohmann::json toJson(const solve::SolveResult& result, const std::vector<Order>& orders);

/// Pretty JSON with a trailing newline.
std::string dumpJson(const nlohmann::json& doc);

} // namespace millrun::io
