#include "millrun/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace millrun::forecast {

namespace {

constexpr int kMinWindow = 2;
constexpr int kMaxWindow = 23;

bool openUnit(double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; }

int toHundredths(double v) { return static_cast<int>(std::lround(v * 100.0)); }

std::vector<std::optional<double>> meanForecasts(std::span<const double> y) {
	std::vector<std::optional<double>> f(y.size());
	double sum = 0.0;
	for (std::size_t t = 0; t < y.size(); ++t) {
		if (t > 0) {
			f[t] = sum / static_cast<double>(t);
		}
		sum += y[t];
	}
	return f;
}

std::vector<std::optional<double>> movingAverageForecasts(std::span<const double> y, int window) {
	const auto k = static_cast<std::size_t>(window);
	std::vector<std::optional<double>> f(y.size());
	for (std::size_t t = k; t < y.size(); ++t) {
		double sum = 0.0;
		for (std::size_t i = t - k; i < t; ++i) {
			sum += y[i];
		}
		f[t] = sum / static_cast<double>(k);
	}
	return f;
}

std::vector<std::optional<double>> sesForecasts(std::span<const double> y, double alpha) {
	std::vector<std::optional<double>> f(y.size());
	if (y.empty()) {
		return f;
	}
	double level = y[0];
	for (std::size_t t = 1; t < y.size(); ++t) {
		f[t] = level;
		level = alpha * y[t] + (1.0 - alpha) * level;
	}
	return f;
}

std::vector<std::optional<double>> holtForecasts(std::span<const double> y, double alpha, double gamma) {
	std::vector<std::optional<double>> f(y.size());
	if (y.size() < 2) {
		return f;
	}
	// The initial trend uses y[1], so the first causal forecast is at t = 2.
	double level = y[0];
	double trend = y[1] - y[0];
	for (std::size_t t = 1; t < y.size(); ++t) {
		const double predicted = level + trend;
		if (t >= 2) {
			f[t] = predicted;
		}
		const double next_level = alpha * y[t] + (1.0 - alpha) * predicted;
		trend = gamma * (next_level - level) + (1.0 - gamma) * trend;
		level = next_level;
	}
	return f;
}

std::vector<std::optional<double>> wintersForecasts(std::span<const double> y, double alpha, double gamma,
                                                    double delta, int season_length) {
	const auto period = static_cast<std::size_t>(season_length);
	std::vector<std::optional<double>> f(y.size());
	if (y.size() < 2 * period) {
		return f;
	}
	double first = 0.0;
	double second = 0.0;
	for (std::size_t i = 0; i < period; ++i) {
		first += y[i];
		second += y[period + i];
	}
	first /= static_cast<double>(period);
	second /= static_cast<double>(period);

	std::vector<double> season(y.size());
	for (std::size_t i = 0; i < period; ++i) {
		season[i] = y[i] / first;
	}
	double level = first;
	double trend = (second - first) / static_cast<double>(period);

	// Initialization reads the whole second season; forecasts are causal from 2L on.
	for (std::size_t t = period; t < y.size(); ++t) {
		const double base = level + trend;
		if (t >= 2 * period) {
			f[t] = base * season[t - period];
		}
		const double next_level = alpha * y[t] / season[t - period] + (1.0 - alpha) * base;
		trend = gamma * (next_level - level) + (1.0 - gamma) * trend;
		season[t] = delta * y[t] / next_level + (1.0 - delta) * season[t - period];
		level = next_level;
	}
	return f;
}

std::vector<std::optional<double>> regressionForecasts(std::span<const double> y) {
	std::vector<std::optional<double>> f(y.size());
	for (std::size_t t = 2; t < y.size(); ++t) {
		const double n = static_cast<double>(t);
		const double x_mean = (n - 1.0) / 2.0;
		double y_mean = 0.0;
		for (std::size_t i = 0; i < t; ++i) {
			y_mean += y[i];
		}
		y_mean /= n;
		double sxy = 0.0;
		double sxx = 0.0;
		for (std::size_t i = 0; i < t; ++i) {
			const double dx = static_cast<double>(i) - x_mean;
			sxy += dx * (y[i] - y_mean);
			sxx += dx * dx;
		}
		const double slope = sxy / sxx;
		f[t] = y_mean + slope * (static_cast<double>(t) - x_mean);
	}
	return f;
}

BacktestResult fitUnchecked(std::span<const double> series, const ModelSpec& spec) {
	BacktestResult result;
	result.spec = spec;
	result.fitted = oneStepForecasts(series, spec);

	double total = 0.0;
	std::size_t zeros = 0;
	for (std::size_t t = 0; t < series.size(); ++t) {
		if (!result.fitted[t]) {
			continue;
		}
		if (series[t] <= 0.0) {
			++zeros;
			continue;
		}
		total += std::abs(series[t] - *result.fitted[t]) / series[t];
		++result.scored;
	}
	if (zeros > 0) {
		result.warnings.push_back(std::to_string(zeros) + " period(s) with zero demand excluded from MAPE");
	}
	result.mape = result.scored > 0 ? total / static_cast<double>(result.scored)
	                                : std::numeric_limits<double>::quiet_NaN();
	return result;
}

bool strictlyPositive(std::span<const double> series) {
	return std::all_of(series.begin(), series.end(), [](double v) { return v > 0.0; });
}

using Evaluator = std::vector<BacktestResult> (*)(std::span<const double>, const std::vector<ModelSpec>&);

std::vector<BacktestResult> evaluateSerial(std::span<const double> series, const std::vector<ModelSpec>& specs) {
	std::vector<BacktestResult> out(specs.size());
	for (std::size_t i = 0; i < specs.size(); ++i) {
		out[i] = fitUnchecked(series, specs[i]);
	}
	return out;
}

std::vector<BacktestResult> evaluateParallel(std::span<const double> series, const std::vector<ModelSpec>& specs) {
	std::vector<BacktestResult> out(specs.size());
	const auto count = static_cast<std::ptrdiff_t>(specs.size());
#pragma omp parallel for schedule(dynamic, 64)
	for (std::ptrdiff_t i = 0; i < count; ++i) {
		out[static_cast<std::size_t>(i)] = fitUnchecked(series, specs[static_cast<std::size_t>(i)]);
	}
	return out;
}

GridSearchResult runGrid(std::span<const double> series, int season_length, Evaluator evaluate) {
	GridSearchResult result;
	if (series.size() < 2) {
		throw std::invalid_argument("grid search: series has " + std::to_string(series.size()) +
		                            " period(s); every model needs at least 2");
	}
	std::vector<ModelSpec> specs = coarseGrid(series.size(), season_length, &result.warnings);
	if (std::any_of(specs.begin(), specs.end(), [](const ModelSpec& s) { return s.kind == ModelKind::Winters; }) &&
	    !strictlyPositive(series)) {
		std::erase_if(specs, [](const ModelSpec& s) { return s.kind == ModelKind::Winters; });
		result.warnings.push_back("winters dropped: multiplicative seasonality needs strictly positive demand");
	}

	std::vector<BacktestResult> evaluated = evaluate(series, specs);

	std::optional<BacktestResult> coarse_winters;
	for (const auto& r : evaluated) {
		if (r.spec.kind == ModelKind::Winters && std::isfinite(r.mape) &&
		    (!coarse_winters || rankBefore(r, *coarse_winters))) {
			coarse_winters = r;
		}
	}
	if (coarse_winters) {
		auto refined = evaluate(series, wintersRefinement(coarse_winters->spec));
		evaluated.insert(evaluated.end(), std::make_move_iterator(refined.begin()),
		                 std::make_move_iterator(refined.end()));
	}

	std::map<ModelKind, std::size_t> unusable;
	for (auto& r : evaluated) {
		if (std::isfinite(r.mape)) {
			result.ranked.push_back(std::move(r));
		} else {
			++unusable[r.spec.kind];
		}
	}
	for (const auto& [kind, count] : unusable) {
		result.warnings.push_back(toString(kind) + ": " + std::to_string(count) +
		                          " grid cell(s) produced no finite MAPE and were dropped");
	}
	std::sort(result.ranked.begin(), result.ranked.end(), rankBefore);
	return result;
}

} // namespace

std::string toString(ModelKind kind) {
	switch (kind) {
	case ModelKind::Mean:
		return "mean";
	case ModelKind::MovingAverage:
		return "moving_average";
	case ModelKind::Ses:
		return "ses";
	case ModelKind::Holt:
		return "holt";
	case ModelKind::Winters:
		return "winters";
	case ModelKind::LinearRegression:
		return "linear_regression";
	}
	return "unknown";
}

ModelKind modelKindFromString(const std::string& text) {
	for (auto kind : {ModelKind::Mean, ModelKind::MovingAverage, ModelKind::Ses, ModelKind::Holt,
	                  ModelKind::Winters, ModelKind::LinearRegression}) {
		if (toString(kind) == text) {
			return kind;
		}
	}
	throw std::invalid_argument("unknown forecast model '" + text + "'");
}

ModelSpec ModelSpec::mean() { return {}; }

ModelSpec ModelSpec::movingAverage(int window) {
	ModelSpec s;
	s.kind = ModelKind::MovingAverage;
	s.window = window;
	s.validate();
	return s;
}

ModelSpec ModelSpec::ses(double alpha) {
	ModelSpec s;
	s.kind = ModelKind::Ses;
	s.alpha = alpha;
	s.validate();
	return s;
}

ModelSpec ModelSpec::holt(double alpha, double gamma) {
	ModelSpec s;
	s.kind = ModelKind::Holt;
	s.alpha = alpha;
	s.gamma = gamma;
	s.validate();
	return s;
}

ModelSpec ModelSpec::winters(double alpha, double gamma, double delta, int season_length) {
	ModelSpec s;
	s.kind = ModelKind::Winters;
	s.alpha = alpha;
	s.gamma = gamma;
	s.delta = delta;
	s.season_length = season_length;
	s.validate();
	return s;
}

ModelSpec ModelSpec::linearRegression() {
	ModelSpec s;
	s.kind = ModelKind::LinearRegression;
	return s;
}

void ModelSpec::validate() const {
	const bool uses_window = kind == ModelKind::MovingAverage;
	const bool uses_alpha = kind == ModelKind::Ses || kind == ModelKind::Holt || kind == ModelKind::Winters;
	const bool uses_gamma = kind == ModelKind::Holt || kind == ModelKind::Winters;
	const bool uses_season = kind == ModelKind::Winters;
	const std::string tag = toString(kind) + ": ";

	if (uses_window ? (window < kMinWindow || window > kMaxWindow) : window != 0) {
		throw std::invalid_argument(tag + "window must be in 2..23 for moving_average and absent otherwise");
	}
	if (uses_alpha ? !openUnit(alpha) : alpha != 0.0) {
		throw std::invalid_argument(tag + "alpha must be in (0,1)");
	}
	if (uses_gamma ? !openUnit(gamma) : gamma != 0.0) {
		throw std::invalid_argument(tag + "gamma must be in (0,1)");
	}
	if (uses_season ? !openUnit(delta) : delta != 0.0) {
		throw std::invalid_argument(tag + "delta must be in (0,1)");
	}
	if (uses_season ? season_length < 2 : season_length != 0) {
		throw std::invalid_argument(tag + "season_length must be >= 2");
	}
}

int ModelSpec::parameterCount() const {
	switch (kind) {
	case ModelKind::Mean:
	case ModelKind::LinearRegression:
		return 0;
	case ModelKind::MovingAverage:
	case ModelKind::Ses:
		return 1;
	case ModelKind::Holt:
		return 2;
	case ModelKind::Winters:
		return 3;
	}
	return 0;
}

std::string ModelSpec::label() const {
	char buf[128];
	switch (kind) {
	case ModelKind::MovingAverage:
		std::snprintf(buf, sizeof buf, "moving_average(k=%d)", window);
		return buf;
	case ModelKind::Ses:
		std::snprintf(buf, sizeof buf, "ses(alpha=%.2f)", alpha);
		return buf;
	case ModelKind::Holt:
		std::snprintf(buf, sizeof buf, "holt(alpha=%.2f, gamma=%.2f)", alpha, gamma);
		return buf;
	case ModelKind::Winters:
		std::snprintf(buf, sizeof buf, "winters(alpha=%.2f, gamma=%.2f, delta=%.2f, L=%d)", alpha, gamma, delta,
		              season_length);
		return buf;
	default:
		return toString(kind);
	}
}

std::size_t minimumHistory(const ModelSpec& spec) {
	switch (spec.kind) {
	case ModelKind::Mean:
	case ModelKind::Ses:
		return 2;
	case ModelKind::MovingAverage:
		return static_cast<std::size_t>(spec.window) + 1;
	case ModelKind::Holt:
	case ModelKind::LinearRegression:
		return 3;
	case ModelKind::Winters:
		return 2 * static_cast<std::size_t>(spec.season_length) + 1;
	}
	return 2;
}

double mape(std::span<const double> actuals, std::span<const double> forecasts) {
	if (actuals.size() != forecasts.size()) {
		throw std::invalid_argument("mape: actuals and forecasts differ in length");
	}
	double total = 0.0;
	std::size_t scored = 0;
	for (std::size_t i = 0; i < actuals.size(); ++i) {
		if (actuals[i] <= 0.0) {
			continue;
		}
		total += std::abs(actuals[i] - forecasts[i]) / actuals[i];
		++scored;
	}
	if (scored == 0) {
		throw std::invalid_argument("mape: no position with a positive actual to score");
	}
	return total / static_cast<double>(scored);
}

std::vector<std::optional<double>> oneStepForecasts(std::span<const double> series, const ModelSpec& spec) {
	switch (spec.kind) {
	case ModelKind::Mean:
		return meanForecasts(series);
	case ModelKind::MovingAverage:
		return movingAverageForecasts(series, spec.window);
	case ModelKind::Ses:
		return sesForecasts(series, spec.alpha);
	case ModelKind::Holt:
		return holtForecasts(series, spec.alpha, spec.gamma);
	case ModelKind::Winters:
		return wintersForecasts(series, spec.alpha, spec.gamma, spec.delta, spec.season_length);
	case ModelKind::LinearRegression:
		return regressionForecasts(series);
	}
	return std::vector<std::optional<double>>(series.size());
}

BacktestResult fitForecast(std::span<const double> series, const ModelSpec& spec) {
	spec.validate();
	const std::size_t needed = minimumHistory(spec);
	if (series.size() < needed) {
		throw std::invalid_argument(spec.label() + " requires at least " + std::to_string(needed) +
		                            " periods of history, got " + std::to_string(series.size()));
	}
	if (spec.kind == ModelKind::Winters && !strictlyPositive(series)) {
		throw std::invalid_argument("winters requires strictly positive demand");
	}
	BacktestResult result = fitUnchecked(series, spec);
	if (result.scored == 0) {
		throw std::invalid_argument(spec.label() + ": no period with positive demand left to score");
	}
	return result;
}

long long mapeRankKey(double value) {
	return std::llround(value * 1e12);
}

bool rankBefore(const BacktestResult& a, const BacktestResult& b) {
	const auto key = [](const BacktestResult& r) {
		return std::make_tuple(mapeRankKey(r.mape), r.spec.parameterCount(), r.spec.window, r.spec.alpha,
		                       r.spec.gamma, r.spec.delta, static_cast<int>(r.spec.kind));
	};
	return key(a) < key(b);
}

std::vector<ModelSpec> coarseGrid(std::size_t series_length, int season_length, std::vector<std::string>* warnings) {
	std::vector<ModelSpec> specs;
	const auto note = [&](std::string message) {
		if (warnings) {
			warnings->push_back(std::move(message));
		}
	};

	specs.push_back(ModelSpec::mean());

	int dropped_windows = 0;
	for (int k = kMinWindow; k <= kMaxWindow; ++k) {
		if (static_cast<std::size_t>(k) + 1 <= series_length) {
			specs.push_back(ModelSpec::movingAverage(k));
		} else {
			++dropped_windows;
		}
	}
	if (dropped_windows > 0) {
		note("moving_average: " + std::to_string(dropped_windows) + " window(s) longer than the history were skipped");
	}

	for (int a = 1; a <= 99; ++a) {
		specs.push_back(ModelSpec::ses(hundredths(a)));
	}

	if (series_length >= 3) {
		for (int a = 1; a <= 99; ++a) {
			for (int g = 1; g <= 99; ++g) {
				specs.push_back(ModelSpec::holt(hundredths(a), hundredths(g)));
			}
		}
		specs.push_back(ModelSpec::linearRegression());
	} else {
		note("holt and linear_regression need at least 3 periods; skipped");
	}

	const ModelSpec probe = ModelSpec::winters(0.5, 0.5, 0.5, season_length);
	if (series_length >= minimumHistory(probe)) {
		for (int a = 5; a <= 95; a += 5) {
			for (int g = 5; g <= 95; g += 5) {
				for (int d = 5; d <= 95; d += 5) {
					specs.push_back(ModelSpec::winters(hundredths(a), hundredths(g), hundredths(d), season_length));
				}
			}
		}
	} else {
		note("winters needs at least " + std::to_string(minimumHistory(probe)) + " periods; skipped");
	}
	return specs;
}

std::vector<ModelSpec> wintersRefinement(const ModelSpec& coarse_best) {
	const int ca = toHundredths(coarse_best.alpha);
	const int cg = toHundredths(coarse_best.gamma);
	const int cd = toHundredths(coarse_best.delta);
	const auto onLattice = [](int a, int g, int d) { return a % 5 == 0 && g % 5 == 0 && d % 5 == 0; };

	std::vector<ModelSpec> specs;
	for (int a = std::max(1, ca - 4); a <= std::min(99, ca + 4); ++a) {
		for (int g = std::max(1, cg - 4); g <= std::min(99, cg + 4); ++g) {
			for (int d = std::max(1, cd - 4); d <= std::min(99, cd + 4); ++d) {
				if (!onLattice(a, g, d)) {
					specs.push_back(ModelSpec::winters(hundredths(a), hundredths(g), hundredths(d),
					                                   coarse_best.season_length));
				}
			}
		}
	}
	return specs;
}

GridSearchResult gridSearch(std::span<const double> series, int season_length) {
	return runGrid(series, season_length, evaluateParallel);
}

GridSearchResult gridSearchSerial(std::span<const double> series, int season_length) {
	return runGrid(series, season_length, evaluateSerial);
}

std::vector<BacktestResult> bestPerKind(const GridSearchResult& result) {
	std::vector<BacktestResult> best;
	for (const auto& r : result.ranked) {
		const bool seen = std::any_of(best.begin(), best.end(),
		                              [&](const BacktestResult& b) { return b.spec.kind == r.spec.kind; });
		if (!seen) {
			best.push_back(r);
		}
	}
	return best;
}

} // namespace millrun::forecast
