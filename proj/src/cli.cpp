#include "millrun/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "millrun/capacity.hpp"
#include "millrun/demand_analytics.hpp"
#include "millrun/forecasting.hpp"
#include "millrun/io.hpp"
#include "millrun/scenario.hpp"
#include "millrun/solvers.hpp"

namespace millrun::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Error raised inside a subcommand, tagged with the module that failed.
struct ModuleError : std::runtime_error {
	ModuleError(const std::string& module, const std::string& what) : std::runtime_error(module + ": " + what) {}
};

template <typename F>
auto inModule(const std::string& module, F&& body) -> decltype(body()) {
	try {
		return body();
	} catch (const ModuleError&) {
		throw;
	} catch (const std::exception& e) {
		throw ModuleError(module, e.what());
	}
}

void emit(const std::optional<fs::path>& path, const std::string& content, std::ostream& out) {
	if (path) {
		inModule("io", [&] { io::writeFileAtomic(*path, content); });
	} else {
		out << content;
	}
}

PlantConfig loadPlant(const RunConfig& config) {
	return inModule("io", [&] {
		PlantConfig plant = io::readPlantConfig(config.config, io::readMachines(config.plant));
		if (config.slack_epsilon) {
			plant.slack_epsilon = *config.slack_epsilon;
		}
		if (config.loss_formula) {
			plant.loss_formula = lossFormulaFromString(*config.loss_formula);
		}
		plant.validate();
		return plant;
	});
}

int runAnalyze(const RunConfig& config, std::ostream& out) {
	const auto series = inModule("io", [&] { return io::readDemand(config.input); });
	json report;
	inModule("analytics", [&] {
		report["n"] = series.size();
		report["d_ins"] = series.hasSales() ? json(analytics::unmetDemandRatio(series)) : json(nullptr);
		const auto fit = analytics::descriptiveStats(series);
		report["mu"] = fit.mu;
		report["sigma"] = fit.sigma;
		report["cv"] = analytics::coefficientOfVariation(fit);
		if (series.size() >= 8) {
			const auto ad = analytics::andersonDarling(series);
			report["ad_stat"] = ad.statistic;
			report["ad_stat_adjusted"] = ad.adjusted;
			report["ad_p"] = ad.p_value;
		} else {
			report["ad_stat"] = nullptr;
			report["ad_stat_adjusted"] = nullptr;
			report["ad_p"] = nullptr;
			report["warnings"] = json::array({"Anderson-Darling skipped: fewer than 8 periods"});
		}
		json tails = json::array();
		for (double threshold : config.thresholds) {
			tails.push_back({{"threshold_kg", threshold},
			                 {"probability_above", analytics::tailProbability(fit, threshold)}});
		}
		report["tail_probabilities"] = std::move(tails);
	});

	if (config.csv) {
		std::string text = "key,value\n";
		for (const char* key : {"n", "d_ins", "mu", "sigma", "cv", "ad_stat", "ad_stat_adjusted", "ad_p"}) {
			const json& v = report[key];
			text += std::string(key) + "," +
			        (v.is_null() ? "" : v.is_number_float() ? io::formatNumber(v.get<double>()) : v.dump()) + "\n";
		}
		for (const auto& tail : report["tail_probabilities"]) {
			text += "tail_above_" + io::formatNumber(tail["threshold_kg"].get<double>()) + "," +
			        io::formatNumber(tail["probability_above"].get<double>()) + "\n";
		}
		emit(config.out, text, out);
	} else {
		emit(config.out, io::dumpJson(report), out);
	}
	return 0;
}

int runForecast(const RunConfig& config, std::ostream& out) {
	const auto series = inModule("io", [&] { return io::readDemand(config.input); });
	const auto demands = series.demands();

	json report;
	std::vector<forecast::BacktestResult> plotted;
	inModule("forecasting", [&] {
		if (config.grid) {
			const auto result = forecast::gridSearch(demands, config.season_length);
			report = io::forecastReport(result, config.top);
			plotted = forecast::bestPerKind(result);
		} else {
			forecast::ModelSpec spec;
			spec.kind = forecast::modelKindFromString(config.model);
			switch (spec.kind) {
			case forecast::ModelKind::MovingAverage:
				spec = forecast::ModelSpec::movingAverage(config.window);
				break;
			case forecast::ModelKind::Ses:
				spec = forecast::ModelSpec::ses(config.alpha);
				break;
			case forecast::ModelKind::Holt:
				spec = forecast::ModelSpec::holt(config.alpha, config.gamma);
				break;
			case forecast::ModelKind::Winters:
				spec = forecast::ModelSpec::winters(config.alpha, config.gamma, config.delta, config.season_length);
				break;
			default:
				break;
			}
			const auto result = forecast::fitForecast(demands, spec);
			report["best"] = io::toJson(result, true);
			plotted.push_back(result);
		}
	});
	emit(config.out, io::dumpJson(report), out);
	if (config.fitted) {
		emit(config.fitted, io::fittedCsv(demands, plotted), out);
	}
	return 0;
}

int runCapacity(const RunConfig& config, std::ostream& out) {
	const PlantConfig plant = loadPlant(config);
	std::vector<double> demands;
	if (config.demand) {
		demands = inModule("io", [&] { return io::readDemand(*config.demand).demands(); });
	}
	const auto report =
	    inModule("capacity", [&] { return capacity::capacityReport(plant, demands, config.n_min, config.n_max); });
	emit(config.out, io::capacityCsv(report), out);
	return 0;
}

int runSchedule(const RunConfig& config, std::ostream& out) {
	const PlantConfig plant = loadPlant(config);
	const auto orders = inModule("io", [&] { return io::readOrders(config.orders); });
	const std::uint64_t seed = config.seed.value_or(0);
	const auto result = inModule("solvers", [&] {
		switch (solve::methodFromString(config.method)) {
		case solve::Method::Oracle:
			return solve::solveExhaustive(orders, plant, config.oracle_limit);
		case solve::Method::Greedy:
			return solve::solveGreedy(orders, plant);
		case solve::Method::LocalSearch:
			break;
		}
		return solve::solveLocalSearch(orders, plant, seed, config.budget);
	});
	emit(config.out, io::dumpJson(io::toJson(result, orders)), out);
	if (config.require_full_service && !result.unserved.empty()) {
		return 2;
	}
	return 0;
}

int runScenario(const RunConfig& config, std::ostream& out, std::ostream& err) {
	const PlantConfig plant = loadPlant(config);
	auto spec = inModule("io", [&] { return io::readScenarioSpec(config.spec); });
	if (config.seed) {
		spec.seed = *config.seed;
	}
	const auto cells = inModule("scenario", [&] { return scenario::warehouseSweep(spec, plant); });
	emit(config.out, io::scenarioCsv(cells), out);

	int code = 0;
	for (const auto& cell : cells) {
		if (cell.error) {
			err << "scenario: month " << cell.month << " A=" << io::formatNumber(cell.capacity_kg)
			    << " failed: " << *cell.error << "\n";
			code = 1;
		}
	}

	if (config.critical_report) {
		json report;
		inModule("scenario", [&] {
			const auto fit = analytics::descriptiveStats(std::span<const double>(spec.monthly_demands));
			report["mu"] = fit.mu;
			report["sigma"] = fit.sigma;
			json entries = json::array();
			for (const auto& option : spec.warehouse_options) {
				const double capacity_kg = option.kilograms(plant.pallet_kg);
				json entry{{"A_kg", capacity_kg}};
				try {
					const auto critical =
					    scenario::criticalDemand(plant, capacity_kg, spec.order_gen, spec.seed, spec.solver);
					entry["critical_demand_kg"] = critical.demand_kg;
					entry["served_below_kg"] = critical.served_below_kg;
					entry["probes"] = critical.probes;
					entry["service_risk"] = scenario::serviceRisk(fit, critical.demand_kg);
					entry["warnings"] = critical.warnings;
				} catch (const std::runtime_error& e) {
					entry["error"] = e.what();
				}
				entries.push_back(std::move(entry));
			}
			report["capacities"] = std::move(entries);
		});
		emit(config.critical_report, io::dumpJson(report), out);
	}
	return code;
}

} // namespace

std::string toString(Command command) {
	switch (command) {
	case Command::Analyze:
		return "analyze";
	case Command::Forecast:
		return "forecast";
	case Command::Capacity:
		return "capacity";
	case Command::Schedule:
		return "schedule";
	case Command::Scenario:
		return "scenario";
	}
	return "unknown";
}

ParseResult parseCli(int argc, const char* const* argv) {
	RunConfig config;
	CLI::App app{"Production planning toolkit: demand analytics, forecasting, capacity and order scheduling",
	             "millrun"};
	app.require_subcommand(1);
	app.set_help_all_flag("--help-all", "Show help for every subcommand");

	std::string input;
	std::string orders;
	std::string plant;
	std::string plant_config;
	std::string demand;
	std::string spec;
	std::string out;
	std::string fitted;
	std::string critical;
	std::string loss_formula;
	double slack_epsilon = 0.0;
	std::uint64_t seed = 0;

	const auto addSeed = [&](CLI::App* sub) {
		return sub->add_option("--seed", seed, "Random seed (falls back to $MILLRUN_SEED)")
		    ->envname("MILLRUN_SEED")
		    ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
	};
	const auto addPlant = [&](CLI::App* sub) {
		sub->add_option("--plant", plant, "Machines CSV (id,t_kg_h,e,m,s_h)")->required()->check(CLI::ExistingFile);
		sub->add_option("--config", plant_config, "Plant key=value config")->required()->check(CLI::ExistingFile);
		return sub->add_option("--slack-epsilon", slack_epsilon, "Tolerance in hours for strict inequalities");
	};

	auto* analyze = app.add_subcommand("analyze", "Unmet demand, normal fit, Anderson-Darling, tail probabilities");
	analyze->add_option("--input", input, "Demand CSV (period,demand_kg[,sales_kg])")->required()->check(
	    CLI::ExistingFile);
	analyze->add_option("--out", out, "Report path (stdout when omitted)");
	analyze->add_option("--threshold", config.thresholds, "Demand threshold for P(demand > threshold)");
	auto* json_flag = analyze->add_flag("--json", "JSON report (default)");
	auto* csv_flag = analyze->add_flag("--csv", config.csv, "key,value CSV report");
	json_flag->excludes(csv_flag);

	auto* fc = app.add_subcommand("forecast", "Backtest forecast models and rank them by MAPE");
	fc->add_option("--input", input, "Demand CSV")->required()->check(CLI::ExistingFile);
	auto* grid = fc->add_flag("--grid", config.grid, "Evaluate the full hyperparameter grid");
	auto* model = fc->add_option("--model", config.model,
	                             "Single model: mean|moving_average|ses|holt|winters|linear_regression");
	grid->excludes(model);
	fc->add_option("--window", config.window, "Moving average window (2..23)");
	fc->add_option("--alpha", config.alpha, "Level smoothing");
	fc->add_option("--gamma", config.gamma, "Trend smoothing");
	fc->add_option("--delta", config.delta, "Seasonal smoothing");
	fc->add_option("--season-length", config.season_length, "Winters season length")->capture_default_str();
	fc->add_option("--top", config.top, "Ranked results kept in the report")->capture_default_str();
	fc->add_option("--report", out, "JSON report path (stdout when omitted)");
	fc->add_option("--fitted", fitted, "Per-period fitted values CSV");

	auto* cap = app.add_subcommand("capacity", "Available capacity as a function of monthly startups");
	addPlant(cap);
	cap->add_option("--demand", demand, "Demand CSV for the required-capacity column")->check(CLI::ExistingFile);
	cap->add_option("--n-min", config.n_min, "First startup count")->capture_default_str();
	cap->add_option("--n-max", config.n_max, "Last startup count")->capture_default_str();
	cap->add_option("--loss-formula", loss_formula, "as_written|prose (overrides the config)");
	cap->add_option("--out", out, "CSV path (stdout when omitted)");

	auto* sched = app.add_subcommand("schedule", "Assign orders to machines under due-date and warehouse limits");
	sched->add_option("--orders", orders, "Orders CSV (id,q_kg,due_days)")->required()->check(CLI::ExistingFile);
	addPlant(sched);
	sched->add_option("--method", config.method, "oracle|greedy|local")
	    ->check(CLI::IsMember({"oracle", "greedy", "local"}))
	    ->capture_default_str();
	addSeed(sched);
	sched->add_option("--budget", config.budget, "Local search evaluation budget")->capture_default_str();
	sched->add_option("--oracle-limit", config.oracle_limit, "Largest (m+1)^n the oracle enumerates")
	    ->capture_default_str();
	sched->add_flag("--require-full-service", config.require_full_service, "Exit 2 when any order is unserved");
	sched->add_option("--out", out, "JSON path (stdout when omitted)");

	auto* scen = app.add_subcommand("scenario", "Warehouse capacity sweep over monthly demands");
	scen->add_option("--spec", spec, "Scenario JSON")->required()->check(CLI::ExistingFile);
	addPlant(scen);
	addSeed(scen);
	scen->add_option("--out", out, "CSV path (stdout when omitted)");
	scen->add_option("--critical-report", critical, "JSON with critical demand and service risk per capacity");

	ParseResult result;
	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		std::ostringstream help;
		app.exit(e, help, help);
		result.output = help.str();
		result.exit_code = 0;
		return result;
	} catch (const CLI::CallForAllHelp& e) {
		std::ostringstream help;
		app.exit(e, help, help);
		result.output = help.str();
		result.exit_code = 0;
		return result;
	} catch (const CLI::ParseError& e) {
		std::string message = e.what();
		std::replace(message.begin(), message.end(), '\n', ' ');
		result.output = "millrun: " + message + " (run with --help for usage)\n";
		result.exit_code = 1;
		return result;
	}

	CLI::App* chosen = app.get_subcommands().front();
	const std::string name = chosen->get_name();
	if (name == "analyze") {
		config.command = Command::Analyze;
	} else if (name == "forecast") {
		config.command = Command::Forecast;
		if (!config.grid && config.model.empty()) {
			result.output = "millrun: forecast needs --grid or --model (run with --help for usage)\n";
			result.exit_code = 1;
			return result;
		}
	} else if (name == "capacity") {
		config.command = Command::Capacity;
	} else if (name == "schedule") {
		config.command = Command::Schedule;
	} else {
		config.command = Command::Scenario;
	}

	config.input = input;
	config.orders = orders;
	config.plant = plant;
	config.config = plant_config;
	config.spec = spec;
	if (!demand.empty()) {
		config.demand = demand;
	}
	if (!out.empty()) {
		config.out = out;
	}
	if (!fitted.empty()) {
		config.fitted = fitted;
	}
	if (!critical.empty()) {
		config.critical_report = critical;
	}
	if (!loss_formula.empty()) {
		config.loss_formula = loss_formula;
	}
	if (auto* eps = chosen->get_option_no_throw("--slack-epsilon"); eps && !eps->empty()) {
		config.slack_epsilon = slack_epsilon;
	}
	if (auto* seed_opt = chosen->get_option_no_throw("--seed"); seed_opt && !seed_opt->empty()) {
		config.seed = seed;
		if (seed_opt->count() > 1) {
			config.warnings.push_back("--seed given " + std::to_string(seed_opt->count()) +
			                          " times; using the last value " + std::to_string(seed));
		}
	}
	result.config = std::move(config);
	return result;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
	for (const auto& warning : config.warnings) {
		err << "millrun: warning: " << warning << "\n";
	}
	try {
		switch (config.command) {
		case Command::Analyze:
			return runAnalyze(config, out);
		case Command::Forecast:
			return runForecast(config, out);
		case Command::Capacity:
			return runCapacity(config, out);
		case Command::Schedule:
			return runSchedule(config, out);
		case Command::Scenario:
			return runScenario(config, out, err);
		}
	} catch (const std::exception& e) {
		err << e.what() << "\n";
		return 1;
	}
	return 1;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
	const ParseResult parsed = parseCli(argc, argv);
	if (!parsed.config) {
		(parsed.exit_code == 0 ? out : err) << parsed.output;
		return parsed.exit_code;
	}
	return run(*parsed.config, out, err);
}

} // namespace millrun::cli
