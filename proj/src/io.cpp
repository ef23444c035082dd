#include "millrun/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace millrun::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
	const auto begin = s.find_first_not_of(" \t\r\n");
	if (begin == std::string::npos) {
		return "";
	}
	const auto end = s.find_last_not_of(" \t\r\n");
	return s.substr(begin, end - begin + 1);
}

std::vector<std::string> splitLine(const std::string& line) {
	std::vector<std::string> cells;
	std::string cell;
	std::istringstream in(line);
	while (std::getline(in, cell, ',')) {
		cells.push_back(trim(cell));
	}
	if (!line.empty() && line.back() == ',') {
		cells.emplace_back();
	}
	return cells;
}

std::size_t requireColumn(const CsvTable& table, const std::string& name, const std::string& source) {
	const auto index = table.column(name);
	if (!index) {
		throw FormatError(source + ": missing column '" + name + "'");
	}
	return *index;
}

int parseInt(const std::string& text, const std::string& context) {
	const double v = parseNumber(text, context);
	if (v != std::floor(v) || std::abs(v) > 1e9) {
		throw FormatError(context + ": expected an integer, got '" + text + "'");
	}
	return static_cast<int>(v);
}

std::string cellContext(const std::string& source, std::size_t row, const std::string& column) {
	return source + " row " + std::to_string(row + 1) + " column " + column;
}

json matrixJson(const schedule::Matrix<double>& m) {
	json rows = json::array();
	for (std::size_t i = 0; i < m.rows(); ++i) {
		json row = json::array();
		for (std::size_t j = 0; j < m.cols(); ++j) {
			row.push_back(m(i, j));
		}
		rows.push_back(std::move(row));
	}
	return rows;
}

json matrixJson(const schedule::Matrix<std::uint8_t>& m) {
	json rows = json::array();
	for (std::size_t i = 0; i < m.rows(); ++i) {
		json row = json::array();
		for (std::size_t j = 0; j < m.cols(); ++j) {
			row.push_back(static_cast<int>(m(i, j)));
		}
		rows.push_back(std::move(row));
	}
	return rows;
}

} // namespace

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
	const auto it = std::find(header.begin(), header.end(), name);
	if (it == header.end()) {
		return std::nullopt;
	}
	return static_cast<std::size_t>(it - header.begin());
}

CsvTable parseCsv(const std::string& text, const std::string& source) {
	CsvTable table;
	std::istringstream in(text);
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		if (trim(line).empty() || trim(line)[0] == '#') {
			continue;
		}
		auto cells = splitLine(line);
		if (table.header.empty()) {
			table.header = std::move(cells);
			continue;
		}
		if (cells.size() != table.header.size()) {
			throw FormatError(source + " line " + std::to_string(line_no) + ": expected " +
			                  std::to_string(table.header.size()) + " fields, found " + std::to_string(cells.size()) +
			                  " (thousands separators are not allowed)");
		}
		table.rows.push_back(std::move(cells));
	}
	if (table.header.empty()) {
		throw FormatError(source + ": empty file, header row expected");
	}
	return table;
}

CsvTable readCsv(const fs::path& path) {
	return parseCsv(readFile(path), path.string());
}

std::string formatNumber(double value) {
	char buf[64];
	const auto result = std::to_chars(buf, buf + sizeof buf, value);
	return std::string(buf, result.ptr);
}

double parseNumber(const std::string& text, const std::string& context) {
	const std::string t = trim(text);
	double value = 0.0;
	const char* first = t.data();
	if (!t.empty() && t[0] == '+') {
		++first;
	}
	const auto result = std::from_chars(first, t.data() + t.size(), value);
	if (t.empty() || result.ec != std::errc() || result.ptr != t.data() + t.size() || !std::isfinite(value)) {
		throw FormatError(context + ": '" + text + "' is not a number");
	}
	return value;
}

std::string readFile(const fs::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw FormatError("cannot open '" + path.string() + "'");
	}
	std::ostringstream buffer;
	buffer << in.rdbuf();
	return buffer.str();
}

void writeFileAtomic(const fs::path& path, const std::string& content) {
	const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
	const fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) {
			throw FormatError("cannot write '" + tmp.string() + "'");
		}
		out << content;
		out.flush();
		if (!out) {
			std::error_code ignored;
			fs::remove(tmp, ignored);
			throw FormatError("write failed for '" + tmp.string() + "'");
		}
	}
	std::error_code ec;
	fs::rename(tmp, path, ec);
	if (ec) {
		fs::remove(tmp, ec);
		throw FormatError("cannot move output into place at '" + path.string() + "'");
	}
}

std::vector<Machine> parseMachines(const std::string& text, const std::string& source) {
	const CsvTable table = parseCsv(text, source);
	const auto id = requireColumn(table, "id", source);
	const auto t = requireColumn(table, "t_kg_h", source);
	const auto e = requireColumn(table, "e", source);
	const auto m = requireColumn(table, "m", source);
	const auto s = requireColumn(table, "s_h", source);
	std::vector<Machine> machines;
	for (std::size_t r = 0; r < table.rows.size(); ++r) {
		const auto& row = table.rows[r];
		try {
			machines.emplace_back(parseInt(row[id], cellContext(source, r, "id")),
			                      parseNumber(row[t], cellContext(source, r, "t_kg_h")),
			                      parseNumber(row[e], cellContext(source, r, "e")),
			                      parseNumber(row[m], cellContext(source, r, "m")),
			                      parseNumber(row[s], cellContext(source, r, "s_h")));
		} catch (const std::invalid_argument& err) {
			throw FormatError(source + ": " + err.what());
		}
	}
	if (machines.empty()) {
		throw FormatError(source + ": no machines listed");
	}
	return machines;
}

std::vector<Machine> readMachines(const fs::path& path) {
	return parseMachines(readFile(path), path.string());
}

std::vector<Order> parseOrders(const std::string& text, const std::string& source) {
	const CsvTable table = parseCsv(text, source);
	const auto id = requireColumn(table, "id", source);
	const auto q = requireColumn(table, "q_kg", source);
	const auto due = requireColumn(table, "due_days", source);
	std::vector<Order> orders;
	for (std::size_t r = 0; r < table.rows.size(); ++r) {
		const auto& row = table.rows[r];
		try {
			orders.emplace_back(parseInt(row[id], cellContext(source, r, "id")),
			                    parseNumber(row[q], cellContext(source, r, "q_kg")),
			                    parseNumber(row[due], cellContext(source, r, "due_days")));
		} catch (const std::invalid_argument& err) {
			throw FormatError(source + ": " + err.what());
		}
	}
	std::stable_sort(orders.begin(), orders.end(), [](const Order& a, const Order& b) { return a.id() < b.id(); });
	try {
		validateOrderSequence(orders);
	} catch (const std::invalid_argument& err) {
		throw FormatError(source + ": " + err.what());
	}
	return orders;
}

std::vector<Order> readOrders(const fs::path& path) {
	return parseOrders(readFile(path), path.string());
}

analytics::DemandSeries parseDemand(const std::string& text, const std::string& source) {
	const CsvTable table = parseCsv(text, source);
	const auto demand = requireColumn(table, "demand_kg", source);
	const auto sales = table.column("sales_kg");
	std::vector<analytics::DemandPeriod> periods;
	for (std::size_t r = 0; r < table.rows.size(); ++r) {
		const auto& row = table.rows[r];
		analytics::DemandPeriod p{parseNumber(row[demand], cellContext(source, r, "demand_kg")), std::nullopt};
		if (sales && !row[*sales].empty()) {
			p.sales_kg = parseNumber(row[*sales], cellContext(source, r, "sales_kg"));
		}
		periods.push_back(p);
	}
	try {
		return analytics::DemandSeries(std::move(periods));
	} catch (const std::invalid_argument& err) {
		throw FormatError(source + ": " + err.what());
	}
}

analytics::DemandSeries readDemand(const fs::path& path) {
	return parseDemand(readFile(path), path.string());
}

PlantConfig parsePlantConfig(const std::string& text, std::vector<Machine> machines, const std::string& source) {
	std::map<std::string, std::string> values;
	std::istringstream in(text);
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		const auto hash = line.find('#');
		if (hash != std::string::npos) {
			line.erase(hash);
		}
		if (trim(line).empty()) {
			continue;
		}
		const auto eq = line.find('=');
		if (eq == std::string::npos) {
			throw FormatError(source + " line " + std::to_string(line_no) + ": expected key = value");
		}
		const std::string key = trim(line.substr(0, eq));
		static const std::vector<std::string> known{"h_per_day",     "monthly_hours", "A_kg",         "A_pallets",
		                                            "pallet_kg",     "slack_epsilon", "ties_interact", "loss_formula"};
		if (std::find(known.begin(), known.end(), key) == known.end()) {
			throw FormatError(source + " line " + std::to_string(line_no) + ": unknown key '" + key + "'");
		}
		values[key] = trim(line.substr(eq + 1));
	}
	const auto number = [&](const std::string& key) { return parseNumber(values.at(key), source + " key " + key); };

	if (!values.count("h_per_day")) {
		throw FormatError(source + ": h_per_day is required");
	}
	if (values.count("A_kg") == values.count("A_pallets")) {
		throw FormatError(source + ": exactly one of A_kg or A_pallets is required");
	}

	PlantConfig plant;
	plant.machines = std::move(machines);
	plant.hours_per_day = number("h_per_day");
	if (values.count("monthly_hours")) {
		plant.monthly_hours = number("monthly_hours");
	}
	if (values.count("pallet_kg")) {
		plant.pallet_kg = number("pallet_kg");
	}
	if (values.count("A_kg")) {
		plant.warehouse_capacity_kg = number("A_kg");
	} else {
		if (!(plant.pallet_kg > 0.0)) {
			throw FormatError(source + ": A_pallets needs pallet_kg > 0");
		}
		plant.warehouse_capacity_kg = number("A_pallets") * plant.pallet_kg;
	}
	if (values.count("slack_epsilon")) {
		plant.slack_epsilon = number("slack_epsilon");
	}
	if (values.count("ties_interact")) {
		const std::string& v = values["ties_interact"];
		if (v != "true" && v != "false") {
			throw FormatError(source + ": ties_interact must be true or false");
		}
		plant.ties_interact = v == "true";
	}
	try {
		if (values.count("loss_formula")) {
			plant.loss_formula = lossFormulaFromString(values["loss_formula"]);
		}
		plant.validate();
	} catch (const std::invalid_argument& err) {
		throw FormatError(source + ": " + err.what());
	}
	return plant;
}

PlantConfig readPlantConfig(const fs::path& path, std::vector<Machine> machines) {
	return parsePlantConfig(readFile(path), std::move(machines), path.string());
}

scenario::ScenarioSpec parseScenarioSpec(const json& doc) {
	scenario::ScenarioSpec spec;
	try {
		spec.monthly_demands = doc.at("monthly_demands").get<std::vector<double>>();
		for (const auto& option : doc.at("warehouse_options")) {
			scenario::WarehouseOption w;
			if (option.is_object() && option.contains("pallets")) {
				w.amount = option.at("pallets").get<double>();
				w.in_pallets = true;
			} else if (option.is_object() && option.contains("kg")) {
				w.amount = option.at("kg").get<double>();
				w.in_pallets = false;
			} else {
				throw FormatError("scenario: warehouse option needs 'pallets' or 'kg'");
			}
			spec.warehouse_options.push_back(w);
		}
		if (doc.contains("order_gen")) {
			const auto& gen = doc.at("order_gen");
			spec.order_gen.count = gen.value("count", spec.order_gen.count);
			spec.order_gen.sizes = scenario::sizeModeFromString(gen.value("sizes", std::string("equal")));
			spec.order_gen.concentration = gen.value("concentration", spec.order_gen.concentration);
			spec.order_gen.working_days = gen.value("working_days", spec.order_gen.working_days);
		}
		spec.seed = doc.value("seed", std::uint64_t{0});
		if (doc.contains("solver")) {
			const auto& solver = doc.at("solver");
			spec.solver.choice = scenario::solverChoiceFromString(solver.value("method", std::string("auto")));
			spec.solver.budget = solver.value("budget", spec.solver.budget);
			spec.solver.oracle_limit = solver.value("oracle_limit", spec.solver.oracle_limit);
		}
		spec.validate();
	} catch (const json::exception& err) {
		throw FormatError(std::string("scenario spec: ") + err.what());
	} catch (const std::invalid_argument& err) {
		throw FormatError(std::string("scenario spec: ") + err.what());
	}
	return spec;
}

scenario::ScenarioSpec readScenarioSpec(const fs::path& path) {
	json doc;
	try {
		doc = json::parse(readFile(path));
	} catch (const json::parse_error& err) {
		throw FormatError(path.string() + ": " + err.what());
	}
	return parseScenarioSpec(doc);
}

std::string capacityCsv(const capacity::CapacityReport& report) {
	std::string out = "n,available_kg,required_max_kg\n";
	for (const auto& row : report.rows) {
		out += std::to_string(row.startups) + "," + formatNumber(row.available_kg) + "," +
		       (row.required_max_kg ? formatNumber(*row.required_max_kg) : "") + "\n";
	}
	return out;
}

std::vector<capacity::CapacityRow> parseCapacityCsv(const std::string& text) {
	const CsvTable table = parseCsv(text, "capacity.csv");
	const auto n = requireColumn(table, "n", "capacity.csv");
	const auto available = requireColumn(table, "available_kg", "capacity.csv");
	const auto required = requireColumn(table, "required_max_kg", "capacity.csv");
	std::vector<capacity::CapacityRow> rows;
	for (std::size_t r = 0; r < table.rows.size(); ++r) {
		const auto& row = table.rows[r];
		capacity::CapacityRow out{parseInt(row[n], cellContext("capacity.csv", r, "n")),
		                          parseNumber(row[available], cellContext("capacity.csv", r, "available_kg")),
		                          std::nullopt, true};
		if (!row[required].empty()) {
			out.required_max_kg = parseNumber(row[required], cellContext("capacity.csv", r, "required_max_kg"));
			out.sufficient = out.available_kg >= *out.required_max_kg;
		}
		rows.push_back(out);
	}
	return rows;
}

std::string scenarioCsv(const std::vector<scenario::SweepCell>& cells) {
	std::string out = "month,A_kg,demand_kg,unserved,Z_kg\n";
	for (const auto& cell : cells) {
		out += std::to_string(cell.month) + "," + formatNumber(cell.capacity_kg) + "," + formatNumber(cell.demand_kg) +
		       "," + (cell.error ? "failed" : std::to_string(cell.unserved)) + "," +
		       (cell.error ? "" : formatNumber(cell.z_kg)) + "\n";
	}
	return out;
}

std::vector<scenario::SweepCell> parseScenarioCsv(const std::string& text) {
	const std::string source = "cuadro2.csv";
	const CsvTable table = parseCsv(text, source);
	const auto month = requireColumn(table, "month", source);
	const auto a = requireColumn(table, "A_kg", source);
	const auto demand = requireColumn(table, "demand_kg", source);
	const auto unserved = requireColumn(table, "unserved", source);
	const auto z = requireColumn(table, "Z_kg", source);
	std::vector<scenario::SweepCell> cells;
	for (std::size_t r = 0; r < table.rows.size(); ++r) {
		const auto& row = table.rows[r];
		scenario::SweepCell cell;
		cell.month = parseInt(row[month], cellContext(source, r, "month"));
		cell.capacity_kg = parseNumber(row[a], cellContext(source, r, "A_kg"));
		cell.demand_kg = parseNumber(row[demand], cellContext(source, r, "demand_kg"));
		if (row[unserved] == "failed") {
			cell.error = "failed";
		} else {
			cell.unserved = static_cast<std::size_t>(parseInt(row[unserved], cellContext(source, r, "unserved")));
			cell.z_kg = parseNumber(row[z], cellContext(source, r, "Z_kg"));
		}
		cells.push_back(cell);
	}
	return cells;
}

std::string fittedCsv(const std::vector<double>& actuals, const std::vector<forecast::BacktestResult>& results) {
	std::string out = "period,actual_kg";
	for (const auto& r : results) {
		std::string label = r.spec.label();
		std::replace(label.begin(), label.end(), ',', ';');
		out += "," + label;
	}
	out += "\n";
	for (std::size_t t = 0; t < actuals.size(); ++t) {
		out += std::to_string(t + 1) + "," + formatNumber(actuals[t]);
		for (const auto& r : results) {
			out += ",";
			if (t < r.fitted.size() && r.fitted[t]) {
				out += formatNumber(*r.fitted[t]);
			}
		}
		out += "\n";
	}
	return out;
}

json toJson(const forecast::ModelSpec& spec) {
	json doc{{"model", forecast::toString(spec.kind)}};
	switch (spec.kind) {
	case forecast::ModelKind::MovingAverage:
		doc["window"] = spec.window;
		break;
	case forecast::ModelKind::Ses:
		doc["alpha"] = spec.alpha;
		break;
	case forecast::ModelKind::Holt:
		doc["alpha"] = spec.alpha;
		doc["gamma"] = spec.gamma;
		break;
	case forecast::ModelKind::Winters:
		doc["alpha"] = spec.alpha;
		doc["gamma"] = spec.gamma;
		doc["delta"] = spec.delta;
		doc["season_length"] = spec.season_length;
		break;
	default:
		break;
	}
	return doc;
}

forecast::ModelSpec modelSpecFromJson(const json& doc) {
	forecast::ModelSpec spec;
	spec.kind = forecast::modelKindFromString(doc.at("model").get<std::string>());
	spec.window = doc.value("window", 0);
	spec.alpha = doc.value("alpha", 0.0);
	spec.gamma = doc.value("gamma", 0.0);
	spec.delta = doc.value("delta", 0.0);
	spec.season_length = doc.value("season_length", 0);
	spec.validate();
	return spec;
}

json toJson(const forecast::BacktestResult& result, bool include_fitted) {
	json doc = toJson(result.spec);
	doc["label"] = result.spec.label();
	doc["mape"] = result.mape;
	doc["scored_periods"] = result.scored;
	if (!result.warnings.empty()) {
		doc["warnings"] = result.warnings;
	}
	if (include_fitted) {
		json fitted = json::array();
		for (const auto& f : result.fitted) {
			fitted.push_back(f ? json(*f) : json(nullptr));
		}
		doc["fitted"] = std::move(fitted);
	}
	return doc;
}

json forecastReport(const forecast::GridSearchResult& result, std::size_t top) {
	json doc;
	json per_kind = json::array();
	for (const auto& best : forecast::bestPerKind(result)) {
		per_kind.push_back(toJson(best, false));
	}
	doc["best_per_model"] = std::move(per_kind);
	json ranking = json::array();
	for (std::size_t i = 0; i < std::min(top, result.ranked.size()); ++i) {
		ranking.push_back(toJson(result.ranked[i], false));
	}
	doc["ranking"] = std::move(ranking);
	doc["evaluated"] = result.ranked.size();
	doc["warnings"] = result.warnings;
	if (!result.ranked.empty()) {
		doc["best"] = toJson(result.ranked.front(), true);
	}
	return doc;
}

json toJson(const schedule::ScheduleEvaluation& eval) {
	json violations = json::array();
	for (const auto& v : eval.violations) {
		violations.push_back({{"constraint", schedule::toString(v.constraint)}, {"order_id", v.order_id},
		                      {"value", v.amount}});
	}
	return {{"T", matrixJson(eval.processing)},
	        {"Tp", eval.processing_per_order},
	        {"F", matrixJson(eval.finish)},
	        {"L", eval.order_finish},
	        {"H", eval.slack},
	        {"lambda", matrixJson(eval.interaction)},
	        {"O", eval.occupancy},
	        {"Z", eval.objective},
	        {"feasible", eval.feasible},
	        {"violations", std::move(violations)}};
}

json toJson(const solve::SolveResult& result, const std::vector<Order>& orders) {
	json assignment = json::array();
	const auto choices = result.best_x.choices();
	for (std::size_t i = 0; i < orders.size(); ++i) {
		assignment.push_back({{"order_id", orders[i].id()},
		                      {"machine_index", choices[i] < 0 ? json(nullptr) : json(choices[i])}});
	}
	json x = json::array();
	const auto& m = result.best_x.matrix();
	for (std::size_t i = 0; i < m.rows(); ++i) {
		json row = json::array();
		for (std::size_t j = 0; j < m.cols(); ++j) {
			row.push_back(static_cast<int>(m(i, j)));
		}
		x.push_back(std::move(row));
	}
	return {{"method", solve::toString(result.method)},
	        {"seed", result.seed},
	        {"iterations", result.iterations},
	        {"x", std::move(x)},
	        {"assignment", std::move(assignment)},
	        {"unserved", result.unserved},
	        {"evaluation", toJson(result.best_eval)}};
}

std::string dumpJson(const json& doc) {
	return doc.dump(2) + "\n";
}

} // namespace millrun::io
