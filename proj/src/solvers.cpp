#include "millrun/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace millrun::solve {

using schedule::Assignment;
using schedule::ScheduleEvaluation;

namespace {

struct Candidate {
	Assignment x;
	ScheduleEvaluation eval;
};

/// Strictly better on (Z, unserved) only; used for move acceptance.
bool improves(const ScheduleEvaluation& a, const ScheduleEvaluation& b) {
	const long long za = objectiveKey(a.objective);
	const long long zb = objectiveKey(b.objective);
	if (za != zb) {
		return za > zb;
	}
	return a.unservedCount() < b.unservedCount();
}

Assignment decode(std::uint64_t code, std::size_t orders, std::size_t machines) {
	Assignment x(orders, machines);
	const std::uint64_t base = machines + 1;
	for (std::size_t i = 0; i < orders; ++i) {
		const auto digit = static_cast<int>(code % base);
		code /= base;
		x.assign(i, digit - 1);
	}
	return x;
}

void checkOracleSize(const std::vector<Order>& orders, const PlantConfig& plant, std::uint64_t limit) {
	const std::uint64_t size = searchSpaceSize(orders.size(), plant.machines.size());
	if (size > limit) {
		throw std::length_error("oracle: search space (m+1)^n = " +
		                        (size == std::numeric_limits<std::uint64_t>::max() ? std::string("overflow")
		                                                                           : std::to_string(size)) +
		                        " exceeds the limit of " + std::to_string(limit) +
		                        "; use the greedy or local search method");
	}
}

SolveResult finish(Candidate best, Method method, std::uint64_t seed, std::uint64_t iterations) {
	SolveResult result;
	result.unserved = best.x.unassignedIds();
	result.best_x = std::move(best.x);
	result.best_eval = std::move(best.eval);
	result.method = method;
	result.seed = seed;
	result.iterations = iterations;
	return result;
}

void consider(std::optional<Candidate>& best, Assignment x, ScheduleEvaluation eval) {
	if (!eval.feasible) {
		return;
	}
	if (!best || preferable(x, eval, best->x, best->eval)) {
		best = Candidate{std::move(x), std::move(eval)};
	}
}

struct Move {
	std::size_t order;
	int target; // machine index or kUnassigned
};

class LocalSearch {
public:
	LocalSearch(const std::vector<Order>& orders, const PlantConfig& plant, const LocalSearchOptions& options)
	    : orders_(orders), plant_(plant), options_(options), rng_(options.seed) {
		const std::size_t n = orders.size();
		const int m = static_cast<int>(plant.machines.size());
		for (std::size_t i = 0; i < n; ++i) {
			for (int t = Assignment::kUnassigned; t < m; ++t) {
				singles_.push_back({i, t});
			}
		}
		for (std::size_t a = 0; a < singles_.size(); ++a) {
			for (std::size_t b = a + 1; b < singles_.size(); ++b) {
				if (singles_[a].order != singles_[b].order) {
					pairs_.emplace_back(a, b);
				}
			}
		}
	}

	SolveResult run(Candidate start) {
		Candidate current = start;
		Candidate best = start;
		std::uint64_t stalled = 0;
		while (evaluations_ < options_.budget) {
			descend(current);
			if (improves(current.eval, best.eval)) {
				best = current;
				stalled = 0;
			} else if (++stalled > options_.stall_kicks) {
				break;
			}
			if (evaluations_ >= options_.budget || orders_.empty()) {
				break;
			}
			current = perturb(best);
		}
		return finish(std::move(best), Method::LocalSearch, options_.seed, evaluations_);
	}

private:
	std::size_t uniform(std::size_t bound) { return static_cast<std::size_t>(rng_() % bound); }

	ScheduleEvaluation evaluate(const Assignment& x) {
		++evaluations_;
		return schedule::evaluate(orders_, plant_, x);
	}

	bool isNoop(const Assignment& x, const Move& move) const { return x.machineOf(move.order) == move.target; }

	void descend(Candidate& current) {
		const std::size_t total = singles_.size() + pairs_.size();
		std::vector<std::size_t> order(total);
		while (evaluations_ < options_.budget) {
			std::iota(order.begin(), order.end(), std::size_t{0});
			for (std::size_t i = total; i > 1; --i) {
				std::swap(order[i - 1], order[uniform(i)]);
			}
			bool improved = false;
			for (std::size_t idx : order) {
				if (evaluations_ >= options_.budget) {
					return;
				}
				Assignment candidate = current.x;
				if (idx < singles_.size()) {
					const Move& mv = singles_[idx];
					if (isNoop(candidate, mv)) {
						continue;
					}
					candidate.assign(mv.order, mv.target);
				} else {
					const auto [a, b] = pairs_[idx - singles_.size()];
					if (isNoop(candidate, singles_[a]) || isNoop(candidate, singles_[b])) {
						continue;
					}
					candidate.assign(singles_[a].order, singles_[a].target);
					candidate.assign(singles_[b].order, singles_[b].target);
				}
				ScheduleEvaluation eval = evaluate(candidate);
				if (eval.feasible && improves(eval, current.eval)) {
					current = Candidate{std::move(candidate), std::move(eval)};
					improved = true;
					break;
				}
			}
			if (!improved) {
				return;
			}
		}
	}

	Candidate perturb(const Candidate& from) {
		const std::size_t n = orders_.size();
		const std::size_t m = plant_.machines.size();
		Assignment x = from.x;
		const std::size_t kicks = 1 + uniform(std::min<std::size_t>(3, n));
		for (std::size_t k = 0; k < kicks; ++k) {
			const std::size_t i = uniform(n);
			x.assign(i, static_cast<int>(uniform(m + 1)) - 1);
		}
		ScheduleEvaluation eval = evaluate(x);
		while (!eval.feasible) {
			int worst = 0;
			for (const auto& v : eval.violations) {
				worst = std::max(worst, v.order_id);
			}
			x.assign(static_cast<std::size_t>(worst - 1), Assignment::kUnassigned);
			eval = evaluate(x);
		}
		return {std::move(x), std::move(eval)};
	}

	const std::vector<Order>& orders_;
	const PlantConfig& plant_;
	LocalSearchOptions options_;
	std::mt19937_64 rng_;
	std::vector<Move> singles_;
	std::vector<std::pair<std::size_t, std::size_t>> pairs_;
	std::uint64_t evaluations_ = 0;
};

} // namespace

std::string toString(Method method) {
	switch (method) {
	case Method::Oracle:
		return "oracle";
	case Method::Greedy:
		return "greedy";
	case Method::LocalSearch:
		return "local_search";
	}
	return "unknown";
}

Method methodFromString(const std::string& text) {
	if (text == "oracle" || text == "exhaustive") {
		return Method::Oracle;
	}
	if (text == "greedy") {
		return Method::Greedy;
	}
	if (text == "local" || text == "local_search") {
		return Method::LocalSearch;
	}
	throw std::invalid_argument("unknown solver method '" + text + "' (expected oracle|greedy|local)");
}

long long objectiveKey(double z_kg) {
	return std::llround(z_kg * 1000.0);
}

bool preferable(const Assignment& a, const ScheduleEvaluation& ea, const Assignment& b,
                const ScheduleEvaluation& eb) {
	if (improves(ea, eb)) {
		return true;
	}
	if (improves(eb, ea)) {
		return false;
	}
	return a.lexLess(b);
}

std::uint64_t searchSpaceSize(std::size_t orders, std::size_t machines) {
	const std::uint64_t base = machines + 1;
	std::uint64_t size = 1;
	for (std::size_t i = 0; i < orders; ++i) {
		if (size > std::numeric_limits<std::uint64_t>::max() / base) {
			return std::numeric_limits<std::uint64_t>::max();
		}
		size *= base;
	}
	return size;
}

SolveResult solveExhaustiveSerial(const std::vector<Order>& orders, const PlantConfig& plant, std::uint64_t limit) {
	validateOrderSequence(orders);
	checkOracleSize(orders, plant, limit);
	const std::uint64_t total = searchSpaceSize(orders.size(), plant.machines.size());
	std::optional<Candidate> best;
	for (std::uint64_t code = 0; code < total; ++code) {
		Assignment x = decode(code, orders.size(), plant.machines.size());
		ScheduleEvaluation eval = schedule::evaluate(orders, plant, x);
		consider(best, std::move(x), std::move(eval));
	}
	return finish(std::move(*best), Method::Oracle, 0, total);
}

SolveResult solveExhaustive(const std::vector<Order>& orders, const PlantConfig& plant, std::uint64_t limit) {
	validateOrderSequence(orders);
	checkOracleSize(orders, plant, limit);
	const std::uint64_t total = searchSpaceSize(orders.size(), plant.machines.size());
	const auto count = static_cast<std::int64_t>(total);
	std::optional<Candidate> best;

#pragma omp parallel
	{
		std::optional<Candidate> local;
#pragma omp for schedule(static)
		for (std::int64_t code = 0; code < count; ++code) {
			Assignment x = decode(static_cast<std::uint64_t>(code), orders.size(), plant.machines.size());
			ScheduleEvaluation eval = schedule::evaluate(orders, plant, x);
			consider(local, std::move(x), std::move(eval));
		}
#pragma omp critical(millrun_oracle_merge)
		{
			if (local) {
				consider(best, std::move(local->x), std::move(local->eval));
			}
		}
	}
	return finish(std::move(*best), Method::Oracle, 0, total);
}

SolveResult solveGreedy(const std::vector<Order>& orders, const PlantConfig& plant) {
	validateOrderSequence(orders);
	const std::size_t n = orders.size();
	const std::size_t m = plant.machines.size();

	std::vector<std::size_t> sequence(n);
	std::iota(sequence.begin(), sequence.end(), std::size_t{0});
	std::stable_sort(sequence.begin(), sequence.end(),
	                 [&](std::size_t a, std::size_t b) { return orders[a].dueDays() < orders[b].dueDays(); });

	Assignment x(n, m);
	ScheduleEvaluation current = schedule::evaluate(orders, plant, x);
	std::uint64_t evaluations = 1;
	for (std::size_t i : sequence) {
		std::optional<Candidate> chosen;
		for (std::size_t j = 0; j < m; ++j) {
			Assignment trial = x;
			trial.assign(i, static_cast<int>(j));
			ScheduleEvaluation eval = schedule::evaluate(orders, plant, trial);
			++evaluations;
			if (!eval.feasible) {
				continue;
			}
			if (!chosen || eval.order_finish[i] < chosen->eval.order_finish[i]) {
				chosen = Candidate{std::move(trial), std::move(eval)};
			}
		}
		if (chosen) {
			x = std::move(chosen->x);
			current = std::move(chosen->eval);
		}
	}
	return finish({std::move(x), std::move(current)}, Method::Greedy, 0, evaluations);
}

SolveResult solveLocalSearch(const std::vector<Order>& orders, const PlantConfig& plant,
                             const LocalSearchOptions& options) {
	if (options.budget == 0) {
		throw std::invalid_argument("local search: budget must be > 0");
	}
	SolveResult greedy = solveGreedy(orders, plant);
	Candidate start{greedy.best_x, greedy.best_eval};
	if (options.warm_start) {
		ScheduleEvaluation eval = schedule::evaluate(orders, plant, *options.warm_start);
		if (eval.feasible && improves(eval, start.eval)) {
			start = Candidate{*options.warm_start, std::move(eval)};
		}
	}
	LocalSearch search(orders, plant, options);
	return search.run(std::move(start));
}

SolveResult solveLocalSearch(const std::vector<Order>& orders, const PlantConfig& plant, std::uint64_t seed,
                             std::uint64_t budget) {
	LocalSearchOptions options;
	options.seed = seed;
	options.budget = budget;
	return solveLocalSearch(orders, plant, options);
}

SolveResult solveAuto(const std::vector<Order>& orders, const PlantConfig& plant, std::uint64_t seed,
                      std::uint64_t budget, std::uint64_t limit) {
	if (searchSpaceSize(orders.size(), plant.machines.size()) <= limit) {
		return solveExhaustive(orders, plant, limit);
	}
	return solveLocalSearch(orders, plant, seed, budget);
}

} // namespace millrun::solve
