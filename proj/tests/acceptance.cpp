// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "millrun/capacity.hpp"
#include "millrun/cli.hpp"
#include "millrun/demand_analytics.hpp"
#include "millrun/forecasting.hpp"
#include "millrun/io.hpp"
#include "millrun/scenario.hpp"
#include "millrun/schedule_model.hpp"
#include "millrun/solvers.hpp"
#include "naive_forecast.hpp"
#include "reference_data.hpp"

using namespace millrun;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kMuTol = 1.0;
constexpr double kSigmaTol = 1.0;
constexpr double kStatsMaxSeconds = 1e-3;
constexpr double kTailMidTol = 0.0005;
constexpr double kTailFarTol = 0.0002;
constexpr double kAdPTol = 0.05;
constexpr double kCvTol = 0.0001;
constexpr double kScaleTol = 1e-12;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kExactShare = 0.90;
constexpr double kGapTol = 0.05;
constexpr double kTimeTol = 1e-9;

struct Check {
	bool ok = true;
	std::string detail;

	void require(bool condition, const std::string& what) {
		if (!condition && ok) {
			ok = false;
			detail = what;
		}
	}
};

int failures = 0;

void report(int number, const std::string& title, const std::function<Check()>& body) {
	Check c;
	try {
		c = body();
	} catch (const std::exception& e) {
		c.ok = false;
		c.detail = std::string("exception: ") + e.what();
	}
	if (!c.ok) {
		++failures;
	}
	std::cout << (c.ok ? "PASS" : "FAIL") << "  " << number << ". " << title;
	if (!c.detail.empty()) {
		std::cout << " (" << c.detail << ")";
	}
	std::cout << std::endl;
}

std::string fmt(double v) {
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.6g", v);
	return buf;
}

fs::path dataDir() {
	const char* dir = std::getenv("MILLRUN_DATA_DIR");
	return dir ? fs::path(dir) : fs::path("data");
}

int runCli(std::vector<std::string> args) {
	args.insert(args.begin(), "millrun");
	std::vector<const char*> argv;
	for (const auto& a : args) {
		argv.push_back(a.c_str());
	}
	std::ostringstream out, err;
	return cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
}

Check statsGolden() {
	Check c;
	const std::span<const double> demand(testing::kDemand2013);
	const auto start = std::chrono::steady_clock::now();
	const auto fit = analytics::descriptiveStats(demand);
	const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	c.require(std::abs(fit.mu - 397058) <= kMuTol, "mu=" + fmt(fit.mu));
	c.require(std::abs(fit.sigma - 71078) <= kSigmaTol, "sigma=" + fmt(fit.sigma));
	c.require(seconds < kStatsMaxSeconds, "took " + fmt(seconds) + " s");
	c.detail = c.ok ? "mu=" + fmt(fit.mu) + " sigma=" + fmt(fit.sigma) + " in " + fmt(seconds * 1e6) + " us" : c.detail;
	return c;
}

Check tails() {
	Check c;
	const analytics::NormalFit fit{397058, 71078, 12};
	const double mid = analytics::tailProbability(fit, 377721);
	const double far = analytics::tailProbability(fit, 625000);
	c.require(std::abs(mid - 0.6072) <= kTailMidTol, "P(>377721)=" + fmt(mid));
	c.require(std::abs(far - 0.0007) <= kTailFarTol, "P(>625000)=" + fmt(far));
	if (c.ok) {
		c.detail = "P(>377721)=" + fmt(mid) + " P(>625000)=" + fmt(far);
	}
	return c;
}

Check andersonDarling() {
	Check c;
	const auto ad = analytics::andersonDarling(std::span<const double>(testing::kDemand2013));
	c.require(std::abs(ad.p_value - 0.609) <= kAdPTol, "p=" + fmt(ad.p_value));
	if (c.ok) {
		c.detail = "A2=" + fmt(ad.statistic) + " p=" + fmt(ad.p_value);
	}
	return c;
}

Check coefficientOfVariation() {
	Check c;
	const double cv = analytics::coefficientOfVariation({380506, 160689, 36});
	c.require(std::abs(cv - 0.4223) <= kCvTol, "cv=" + fmt(cv));
	if (c.ok) {
		c.detail = "cv=" + fmt(cv);
	}
	return c;
}

Check forecastingProperties() {
	Check c;
	const std::vector<forecast::ModelSpec> specs{forecast::ModelSpec::mean(),
	                                             forecast::ModelSpec::movingAverage(5),
	                                             forecast::ModelSpec::ses(0.4),
	                                             forecast::ModelSpec::holt(0.3, 0.2),
	                                             forecast::ModelSpec::winters(0.3, 0.1, 0.3),
	                                             forecast::ModelSpec::linearRegression()};
	const auto y = testing::ar1Series(21, 48);

	// Causality by mutation.
	for (const auto& spec : specs) {
		const auto base = forecast::oneStepForecasts(y, spec);
		for (std::size_t t = 0; t < y.size(); ++t) {
			auto mutated = y;
			mutated[t] *= 1.5;
			const auto changed = forecast::oneStepForecasts(mutated, spec);
			for (std::size_t s = 0; s <= t; ++s) {
				c.require(base[s] == changed[s], spec.label() + " not causal at t=" + std::to_string(t));
			}
		}
	}

	// Scale invariance of MAPE.
	for (std::uint64_t seed = 0; seed < 10; ++seed) {
		auto a = testing::ar1Series(seed, 36);
		auto f = testing::ar1Series(seed + 50, 36);
		const double before = forecast::mape(a, f);
		for (auto* v : {&a, &f}) {
			for (double& x : *v) {
				x *= 3.7;
			}
		}
		c.require(std::abs(forecast::mape(a, f) - before) <= kScaleTol, "mape not scale invariant");
	}

	// Constant series.
	const std::vector<double> flat(24, 1234.0);
	c.require(forecast::fitForecast(flat, forecast::ModelSpec::mean()).mape == 0.0, "constant series mape != 0");

	// Determinism.
	const auto r1 = forecast::gridSearch(y);
	const auto r2 = forecast::gridSearch(y);
	c.require(r1.ranked.size() == r2.ranked.size(), "grid size differs between runs");
	for (std::size_t i = 0; c.ok && i < r1.ranked.size(); ++i) {
		c.require(r1.ranked[i].spec == r2.ranked[i].spec && r1.ranked[i].mape == r2.ranked[i].mape,
		          "grid ranking differs between runs");
	}

	// Oracle equivalence.
	for (std::uint64_t seed = 1; seed <= 10 && c.ok; ++seed) {
		std::string why;
		c.require(testing::gridAgreesWithOracle(testing::ar1Series(seed, 48), &why),
		          "seed " + std::to_string(seed) + ": " + why);
	}
	if (c.ok) {
		c.detail = "causality, scale, constant, determinism, oracle on 10 series";
	}
	return c;
}

Check warehouseSweep() {
	Check c;
	const auto dir = dataDir();
	const PlantConfig plant = io::readPlantConfig(dir / "plant.cfg", io::readMachines(dir / "plant.csv"));
	auto spec = io::readScenarioSpec(dir / "scenario.json");
	c.require(spec.monthly_demands.size() == 12, "sample scenario should list 12 months");
	spec.warehouse_options = {{84, true}, {144, true}, {1e9, false}};
	const auto cells = scenario::warehouseSweep(spec, plant);
	c.require(cells.size() == 36, "expected 36 cells");

	std::size_t small_total = 0, mid_total = 0, large_total = 0;
	for (std::size_t month = 0; month < 12 && c.ok; ++month) {
		const auto& a = cells[month * 3];
		const auto& b = cells[month * 3 + 1];
		const auto& inf = cells[month * 3 + 2];
		c.require(!a.error && !b.error && !inf.error, "cell failed in month " + std::to_string(month + 1));
		c.require(a.unserved >= b.unserved && b.unserved >= inf.unserved,
		          "unserved not monotone in month " + std::to_string(month + 1));
		small_total += a.unserved;
		mid_total += b.unserved;
		large_total += inf.unserved;
	}
	c.require(small_total > 0, "plant is not overloaded at 84 pallets");
	c.require(large_total == 0, std::to_string(large_total) + " unserved with an unbounded warehouse");
	if (c.ok) {
		c.detail = "unserved totals 84p=" + std::to_string(small_total) + " 144p=" + std::to_string(mid_total) +
		           " unbounded=" + std::to_string(large_total);
	}
	return c;
}

Check solverOracle() {
	Check c;
	double oracle_seconds = 0.0;
	int exact = 0;
	double worst_gap = 0.0;
	for (std::uint64_t seed = 0; seed < 50; ++seed) {
		const auto inst = testing::deskInstance(seed);
		const auto start = std::chrono::steady_clock::now();
		const auto oracle = solve::solveExhaustive(inst.orders, inst.plant);
		oracle_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		const auto local = solve::solveLocalSearch(inst.orders, inst.plant, seed, 20000);
		for (const auto* r : {&oracle, &local}) {
			c.require(schedule::evaluate(inst.orders, inst.plant, r->best_x).feasible,
			          "infeasible schedule on seed " + std::to_string(seed));
		}
		const double zo = oracle.best_eval.objective;
		const double zl = local.best_eval.objective;
		if (solve::objectiveKey(zo) == solve::objectiveKey(zl)) {
			++exact;
		}
		const double gap = zo > 0 ? (zo - zl) / zo : 0.0;
		worst_gap = std::max(worst_gap, gap);
		c.require(gap <= kGapTol, "gap " + fmt(gap) + " on seed " + std::to_string(seed));
	}
	c.require(oracle_seconds < kOracleBudgetSeconds, "oracle took " + fmt(oracle_seconds) + " s");
	c.require(exact >= kExactShare * 50, "exact on " + std::to_string(exact) + "/50");
	if (c.ok) {
		c.detail = "exact " + std::to_string(exact) + "/50, worst gap " + fmt(worst_gap) + ", oracle " +
		           fmt(oracle_seconds) + " s";
	}
	return c;
}

Check evaluatorInvariants() {
	Check c;
	using schedule::Assignment;

	// Hand trace: M1 100 kg/h + 2 h, M2 50 kg/h + 1 h; orders 1 and 3 on M1, order 2 on M2.
	{
		const std::vector<Machine> machines{Machine(1, 100, 1, 0, 2), Machine(2, 50, 1, 0, 1)};
		const std::vector<Order> orders{Order(1, 200, 1), Order(2, 100, 2), Order(3, 300, 3)};
		const auto ev = schedule::evaluate(orders, PlantConfig::make(machines, 8, 450),
		                                   Assignment::fromChoices({0, 1, 0}, 2));
		const double F[3][2] = {{4, 0}, {4, 3}, {9, 3}};
		const double L[3] = {4, 3, 9};
		const double H[3] = {4, 13, 15};
		const double O[3] = {300, 600, 400};
		const int lambda[3][3] = {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
		for (std::size_t i = 0; i < 3; ++i) {
			for (std::size_t j = 0; j < 2; ++j) {
				c.require(std::abs(ev.finish(i, j) - F[i][j]) <= kTimeTol, "golden F mismatch");
			}
			c.require(std::abs(ev.order_finish[i] - L[i]) <= kTimeTol, "golden L mismatch");
			c.require(std::abs(ev.slack[i] - H[i]) <= kTimeTol, "golden H mismatch");
			c.require(ev.occupancy[i] == O[i], "golden O mismatch");
			for (std::size_t k = 0; k < 3; ++k) {
				c.require(ev.interaction(i, k) == lambda[i][k], "golden lambda mismatch");
			}
		}
		c.require(ev.objective == 600 && !ev.feasible && ev.violations.size() == 1 &&
		              ev.violations[0].constraint == schedule::Constraint::Warehouse && ev.violations[0].order_id == 2,
		          "golden verdict mismatch");
	}

	std::mt19937_64 rng(8);
	for (std::uint64_t seed = 0; seed < 300 && c.ok; ++seed) {
		const std::size_t n = 3 + seed % 6;
		const std::size_t m = 2 + seed % 2;
		const auto inst = testing::randomInstance(seed, n, m);
		std::vector<int> choices(n);
		for (int& v : choices) {
			v = static_cast<int>(rng() % (m + 1)) - 1;
		}
		const auto ev = schedule::evaluate(inst.orders, inst.plant, Assignment::fromChoices(choices, m));

		for (std::size_t i = 0; i < n; ++i) {
			c.require(ev.interaction(i, i) == 0, "lambda diagonal");
			for (std::size_t k = 0; k < n; ++k) {
				c.require(ev.interaction(i, k) == ev.interaction(k, i), "lambda asymmetric");
			}
		}

		// Column independence: reshuffle everything off machine 0.
		auto other = choices;
		for (int& v : other) {
			if (v != 0) {
				v = static_cast<int>(rng() % m);
				v = v == 0 ? -1 : v;
			}
		}
		const auto ev2 = schedule::evaluate(inst.orders, inst.plant, Assignment::fromChoices(other, m));
		for (std::size_t i = 0; i < n; ++i) {
			c.require(std::abs(ev2.finish(i, 0) - ev.finish(i, 0)) <= kTimeTol, "machine column dependence");
		}

		// Relaxation in A.
		if (ev.feasible) {
			auto plant = inst.plant;
			plant.warehouse_capacity_kg *= 1.25;
			c.require(schedule::evaluate(inst.orders, plant, Assignment::fromChoices(choices, m)).feasible,
			          "feasibility lost when A grows");
		}
	}
	if (c.ok) {
		c.detail = "golden trace plus 300 random instances";
	}
	return c;
}

Check capacityIdentities() {
	Check c;
	// Dyadic rates and startups keep every product exact in binary.
	const std::vector<Machine> machines{Machine(1, 100, 1, 0, 12), Machine(2, 90, 1, 0, 12.5),
	                                    Machine(3, 120, 0.5, 0.5, 11), Machine(4, 85.5, 1, 0, 12.25)};
	const auto plant = PlantConfig::make(machines, 8, 1000);
	const double m = static_cast<double>(machines.size());
	const auto profile = capacity::capacityProfile(plant);
	const double cn = capacity::nominalCapacity(plant);
	for (long long n = 0; n <= 120; ++n) {
		c.require(profile.available(n) == cn - capacity::capacityLoss(plant, n),
		          "available != C_N - loss at n=" + std::to_string(n));
		for (long long k = 0; k <= 10; ++k) {
			c.require(capacity::capacityLoss(plant, n + k) ==
			              capacity::capacityLoss(plant, n) + capacity::capacityLoss(plant, k),
			          "loss not additive at " + std::to_string(n) + "+" + std::to_string(k));
		}
		c.require(capacity::capacityLoss(plant, n, LossFormula::Prose) ==
		              capacity::capacityLoss(plant, n, LossFormula::AsWritten) / m,
		          "prose/as-written ratio is not 1/m at n=" + std::to_string(n));
	}
	if (c.ok) {
		c.detail = "C_N=" + fmt(cn) + " loss/start=" + fmt(profile.loss_per_start_kg);
	}
	return c;
}

Check cliDeterminism() {
	Check c;
	const auto dir = dataDir();
	const auto work = fs::temp_directory_path() / "millrun_acceptance";
	fs::remove_all(work);
	fs::create_directories(work);

	// A small scenario keeps the critical-demand search quick.
	auto small = nlohmann::json::parse(io::readFile(dir / "scenario.json"));
	small["order_gen"]["count"] = 6;
	io::writeFileAtomic(work / "small.json", io::dumpJson(small));

	const std::string plant = (dir / "plant.csv").string();
	const std::string config = (dir / "plant.cfg").string();
	const std::vector<std::vector<std::string>> runs{
	    {"analyze", "--input", (dir / "demand.csv").string(), "--threshold", "377721", "--out", "@"},
	    {"forecast", "--input", (dir / "demand.csv").string(), "--grid", "--report", "@"},
	    {"capacity", "--plant", plant, "--config", config, "--demand", (dir / "demand.csv").string(), "--out", "@"},
	    {"schedule", "--orders", (dir / "orders.csv").string(), "--plant", plant, "--config", config, "--method",
	     "local", "--seed", "11", "--out", "@"},
	    {"scenario", "--spec", (dir / "scenario.json").string(), "--plant", plant, "--config", config, "--seed", "5",
	     "--out", "@"},
	    {"scenario", "--spec", (work / "small.json").string(), "--plant", plant, "--config", config, "--seed", "5",
	     "--out", "@", "--critical-report", "@critical"},
	};
	int index = 0;
	for (const auto& run : runs) {
		std::vector<std::string> contents[2];
		for (int rep = 0; rep < 2; ++rep) {
			auto args = run;
			std::vector<fs::path> outputs;
			for (auto& a : args) {
				if (!a.empty() && a[0] == '@') {
					outputs.push_back(work / (std::to_string(index) + a.substr(1) + "_" + std::to_string(rep)));
					a = outputs.back().string();
				}
			}
			const int code = runCli(args);
			c.require(code == 0, run[0] + " exited with " + std::to_string(code));
			for (const auto& path : outputs) {
				contents[rep].push_back(io::readFile(path));
			}
		}
		c.require(contents[0] == contents[1], run[0] + " output differs between runs");
		++index;
	}
	fs::remove_all(work);
	if (c.ok) {
		c.detail = std::to_string(runs.size()) + " commands";
	}
	return c;
}

} // namespace

int main() {
	report(1, "descriptive statistics on the 2013 demands", statsGolden);
	report(2, "tail probabilities at 377,721 and 625,000 kg", tails);
	report(3, "Anderson-Darling p-value", andersonDarling);
	report(4, "coefficient of variation", coefficientOfVariation);
	report(5, "forecasting properties and grid oracle equivalence", forecastingProperties);
	report(6, "warehouse sweep monotonicity and unbounded-warehouse service", warehouseSweep);
	report(7, "solver oracle suite on 50 desk instances", solverOracle);
	report(8, "schedule evaluator invariants and golden trace", evaluatorInvariants);
	report(9, "capacity identities", capacityIdentities);
	report(10, "CLI determinism", cliDeterminism);
	std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
	          << std::endl;
	return failures == 0 ? 0 : 1;
}
