#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace millrun::forecast {

enum class ModelKind { Mean, MovingAverage, Ses, Holt, Winters, LinearRegression };

std::string toString(ModelKind kind);
ModelKind modelKindFromString(const std::string& text);

/// Model family plus its hyperparameters. Only the fields that belong to the
/// kind are meaningful; validate() rejects anything else.
struct ModelSpec {
	ModelKind kind = ModelKind::Mean;
	int window = 0;         // moving average, 2..23
	double alpha = 0.0;     // level
	double gamma = 0.0;     // trend
	double delta = 0.0;     // season
	int season_length = 0;  // winters

	static ModelSpec mean();
	static ModelSpec movingAverage(int window);
	static ModelSpec ses(double alpha);
	static ModelSpec holt(double alpha, double gamma);
	static ModelSpec winters(double alpha, double gamma, double delta, int season_length = 12);
	static ModelSpec linearRegression();

	void validate() const;
	int parameterCount() const;
	std::string label() const;

	bool operator==(const ModelSpec&) const = default;
};

/// Fewest periods the model needs to produce at least one scored forecast.
std::size_t minimumHistory(const ModelSpec& spec);

struct BacktestResult {
	ModelSpec spec;
	std::vector<std::optional<double>> fitted; // one-step-ahead; nullopt during warm-up
	double mape = 0.0;
	std::size_t scored = 0;
	std::vector<std::string> warnings;
};

/// Mean of |a - f| / a over positions with a > 0. Positions with a <= 0 are
/// skipped; throws if nothing is left to score or the lengths differ.
double mape(std::span<const double> actuals, std::span<const double> forecasts);

/// Causal one-step-ahead forecasts: entry t only depends on values before t.
std::vector<std::optional<double>> oneStepForecasts(std::span<const double> series, const ModelSpec& spec);

/// Throws std::invalid_argument naming the required minimum when the series
/// is too short for the model.
BacktestResult fitForecast(std::span<const double> series, const ModelSpec& spec);

/// Strict weak ordering used for ranking: MAPE (quantized to 1e-12), then
/// fewer hyperparameters, then smaller window/alpha/gamma/delta, then kind.
bool rankBefore(const BacktestResult& a, const BacktestResult& b);

/// MAPE bucket used by rankBefore.
long long mapeRankKey(double mape);

struct GridSearchResult {
	std::vector<BacktestResult> ranked;
	std::vector<std::string> warnings;
};

/// Grid values are stored as integer hundredths so the grid is exact.
inline double hundredths(int k) { return static_cast<double>(k) / 100.0; }

/// Candidates evaluated before Winters refinement, in a fixed order.
std::vector<ModelSpec> coarseGrid(std::size_t series_length, int season_length, std::vector<std::string>* warnings);

/// Winters refinement cells around a coarse optimum (step 0.01, +-0.04,
/// excluding cells already on the 0.05 coarse lattice).
std::vector<ModelSpec> wintersRefinement(const ModelSpec& coarse_best);

/// Evaluates the full grid in parallel (OpenMP) and ranks it.
GridSearchResult gridSearch(std::span<const double> series, int season_length = 12);

/// Single-threaded reference of gridSearch; identical output.
GridSearchResult gridSearchSerial(std::span<const double> series, int season_length = 12);

/// Best result per model kind, in ranking order.
std::vector<BacktestResult> bestPerKind(const GridSearchResult& result);

} // namespace millrun::forecast
