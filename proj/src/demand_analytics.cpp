#include "millrun/demand_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace millrun::analytics {

DemandSeries::DemandSeries(std::vector<DemandPeriod> periods) : periods_(std::move(periods)) {
	if (periods_.empty()) {
		throw std::invalid_argument("demand series must contain at least one period");
	}
	for (std::size_t i = 0; i < periods_.size(); ++i) {
		const auto& p = periods_[i];
		const bool demand_ok = std::isfinite(p.demand_kg) && p.demand_kg >= 0.0;
		const bool sales_ok = !p.sales_kg || (std::isfinite(*p.sales_kg) && *p.sales_kg >= 0.0);
		if (!demand_ok || !sales_ok) {
			throw std::invalid_argument("demand series: period " + std::to_string(i + 1) +
			                            " has a negative or non-finite value");
		}
	}
}

DemandSeries DemandSeries::fromDemands(std::span<const double> demands) {
	std::vector<DemandPeriod> periods;
	periods.reserve(demands.size());
	for (double d : demands) {
		periods.push_back({d, std::nullopt});
	}
	return DemandSeries(std::move(periods));
}

std::vector<double> DemandSeries::demands() const {
	std::vector<double> out;
	out.reserve(periods_.size());
	for (const auto& p : periods_) {
		out.push_back(p.demand_kg);
	}
	return out;
}

bool DemandSeries::hasSales() const {
	return std::all_of(periods_.begin(), periods_.end(), [](const DemandPeriod& p) { return p.sales_kg.has_value(); });
}

double unmetDemandRatio(const DemandSeries& series) {
	double total = 0.0;
	const auto& periods = series.periods();
	for (std::size_t i = 0; i < periods.size(); ++i) {
		const auto& p = periods[i];
		if (p.demand_kg == 0.0) {
			throw std::invalid_argument("unmet demand ratio: demand is zero in period " + std::to_string(i + 1));
		}
		if (!p.sales_kg) {
			throw std::invalid_argument("unmet demand ratio: period " + std::to_string(i + 1) + " has no sales");
		}
		total += (p.demand_kg - *p.sales_kg) / p.demand_kg;
	}
	return total / static_cast<double>(periods.size());
}

NormalFit descriptiveStats(std::span<const double> values) {
	const std::size_t n = values.size();
	if (n < 2) {
		throw std::invalid_argument("descriptive stats need at least 2 observations");
	}
	const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
	double ss = 0.0;
	for (double v : values) {
		ss += (v - mean) * (v - mean);
	}
	const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
	if (!(sigma > 0.0)) {
		throw std::invalid_argument("descriptive stats: constant series has zero standard deviation");
	}
	return {mean, sigma, n};
}

NormalFit descriptiveStats(const DemandSeries& series) {
	const auto d = series.demands();
	return descriptiveStats(std::span<const double>(d));
}

double normalCdf(double z) {
	return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace {

// D'Agostino & Stephens (1986), case 3 (both parameters estimated).
double adPValue(double a) {
	if (a >= 0.6) {
		return std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
	}
	if (a >= 0.34) {
		return std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
	}
	if (a >= 0.2) {
		return 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
	}
	return 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
}

} // namespace

AndersonDarlingResult andersonDarling(std::span<const double> values) {
	const std::size_t n = values.size();
	if (n < 8) {
		throw std::invalid_argument("Anderson-Darling needs at least 8 observations, got " + std::to_string(n));
	}
	const NormalFit fit = descriptiveStats(values);

	std::vector<double> z(values.begin(), values.end());
	std::sort(z.begin(), z.end());
	for (double& v : z) {
		v = (v - fit.mu) / fit.sigma;
	}

	const double nd = static_cast<double>(n);
	double sum = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		// log(1 - Phi(z)) == log(Phi(-z)), which keeps precision in the upper tail.
		const double lower = std::log(normalCdf(z[i]));
		const double upper = std::log(normalCdf(-z[n - 1 - i]));
		sum += (2.0 * static_cast<double>(i) + 1.0) * (lower + upper);
	}
	const double a2 = -nd - sum / nd;
	const double adjusted = a2 * (1.0 + 0.75 / nd + 2.25 / (nd * nd));
	return {a2, adjusted, std::clamp(adPValue(adjusted), 0.0, 1.0)};
}

AndersonDarlingResult andersonDarling(const DemandSeries& series) {
	const auto d = series.demands();
	return andersonDarling(std::span<const double>(d));
}

double tailProbability(const NormalFit& fit, double threshold) {
	return normalCdf(-(threshold - fit.mu) / fit.sigma);
}

double coefficientOfVariation(const NormalFit& fit) {
	if (fit.mu == 0.0) {
		throw std::invalid_argument("coefficient of variation undefined for zero mean");
	}
	return fit.sigma / fit.mu;
}

} // namespace millrun::analytics
