#pragma once

#include <optional>
#include <span>
#include <vector>

namespace millrun::analytics {

struct DemandPeriod {
	double demand_kg;
	std::optional<double> sales_kg;
};

/// Ordered monthly history. Non-empty; all values finite and >= 0.
class DemandSeries {
public:
	explicit DemandSeries(std::vector<DemandPeriod> periods);

	/// Forecast-only series (no sales column).
	static DemandSeries fromDemands(std::span<const double> demands);

	std::size_t size() const { return periods_.size(); }
	const std::vector<DemandPeriod>& periods() const { return periods_; }
	std::vector<double> demands() const;
	bool hasSales() const;

private:
	std::vector<DemandPeriod> periods_;
};

struct NormalFit {
	double mu;
	double sigma; // sample standard deviation (n - 1)
	std::size_t n;
};

struct AndersonDarlingResult {
	double statistic;  // A^2 against the fitted normal
	double adjusted;   // A^2 (1 + 0.75/n + 2.25/n^2)
	double p_value;
};

/// Mean of per-period (D - V) / D. Throws if any D is zero (names the period)
/// or if a period has no sales figure.
double unmetDemandRatio(const DemandSeries& series);

/// Throws for n < 2 or constant data.
NormalFit descriptiveStats(const DemandSeries& series);
NormalFit descriptiveStats(std::span<const double> values);

/// Normality test with mean and variance estimated from the sample.
/// Requires n >= 8 and non-constant data.
AndersonDarlingResult andersonDarling(std::span<const double> values);
AndersonDarlingResult andersonDarling(const DemandSeries& series);

/// Standard normal CDF via erfc.
double normalCdf(double z);

/// P(demand > threshold) under the fit.
double tailProbability(const NormalFit& fit, double threshold);

/// sigma / mu; throws when mu == 0.
double coefficientOfVariation(const NormalFit& fit);

} // namespace millrun::analytics
