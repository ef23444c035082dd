#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace millrun::cli {

enum class Command { Analyze, Forecast, Capacity, Schedule, Scenario };

std::string toString(Command command);

struct RunConfig {
	Command command = Command::Analyze;

	// Inputs
	std::filesystem::path input;  // analyze, forecast
	std::filesystem::path orders; // schedule
	std::filesystem::path plant;  // capacity, schedule, scenario
	std::filesystem::path config; // capacity, schedule, scenario
	std::optional<std::filesystem::path> demand; // capacity
	std::filesystem::path spec;   // scenario

	// Outputs; stdout when empty
	std::optional<std::filesystem::path> out;
	std::optional<std::filesystem::path> fitted;          // forecast
	std::optional<std::filesystem::path> critical_report; // scenario

	std::optional<std::uint64_t> seed;
	std::uint64_t budget = 20'000;
	std::uint64_t oracle_limit = 10'000'000;
	std::string method = "local";
	bool require_full_service = false;
	bool csv = false; // analyze output format

	// forecast
	bool grid = false;
	std::string model;
	int window = 0;
	double alpha = 0.0;
	double gamma = 0.0;
	double delta = 0.0;
	int season_length = 12;
	std::size_t top = 20;

	// analyze
	std::vector<double> thresholds;

	// capacity
	long long n_min = 0;
	long long n_max = 120;
	std::optional<std::string> loss_formula;

	std::optional<double> slack_epsilon;

	std::vector<std::string> warnings;
};

struct ParseResult {
	std::optional<RunConfig> config;
	int exit_code = 0;       // meaningful when config is empty
	std::string output;      // help text or diagnostic
};

/// Validates flags and that input files exist. On failure returns a
/// single-line diagnostic and a nonzero exit code; --help returns usage and 0.
ParseResult parseCli(int argc, const char* const* argv);

/// 0 on success, 2 when the model reports an unmet service requirement,
/// 1 on errors (message prefixed with the failing module).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parseCli + run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace millrun::cli
