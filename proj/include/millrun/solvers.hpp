#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "millrun/core_model.hpp"
#include "millrun/schedule_model.hpp"

namespace millrun::solve {

enum class Method { Oracle, Greedy, LocalSearch };

std::string toString(Method method);
Method methodFromString(const std::string& text);

struct SolveResult {
	schedule::Assignment best_x;
	schedule::ScheduleEvaluation best_eval;
	std::vector<int> unserved; // ids of zero rows of best_x
	Method method = Method::Greedy;
	std::uint64_t seed = 0;
	std::uint64_t iterations = 0; // evaluations performed
};

/// Objective key at gram resolution so that ranking is a total order.
long long objectiveKey(double z_kg);

/// Total order used by every solver: larger Z, then fewer unserved, then the
/// lexicographically smallest x.
bool preferable(const schedule::Assignment& a, const schedule::ScheduleEvaluation& ea,
                const schedule::Assignment& b, const schedule::ScheduleEvaluation& eb);

constexpr std::uint64_t kDefaultOracleLimit = 10'000'000;

/// (m+1)^n, saturating at UINT64_MAX.
std::uint64_t searchSpaceSize(std::size_t orders, std::size_t machines);

/// Enumerates all (m+1)^n assignments (OpenMP-parallel). Throws
/// std::length_error when the space exceeds `limit`.
SolveResult solveExhaustive(const std::vector<Order>& orders, const PlantConfig& plant,
                            std::uint64_t limit = kDefaultOracleLimit);

/// Serial reference for solveExhaustive; returns the same assignment.
SolveResult solveExhaustiveSerial(const std::vector<Order>& orders, const PlantConfig& plant,
                                  std::uint64_t limit = kDefaultOracleLimit);

/// Earliest-due-date first; each order goes to the machine with the earliest
/// feasible finish or stays unserved.
SolveResult solveGreedy(const std::vector<Order>& orders, const PlantConfig& plant);

struct LocalSearchOptions {
	std::uint64_t seed = 0;
	std::uint64_t budget = 20'000;     // evaluation budget, > 0
	std::uint64_t stall_kicks = 40;    // perturbations without a new best before stopping
	std::optional<schedule::Assignment> warm_start; // used when feasible and better than greedy
};

/// Iterated first-improvement descent from the greedy schedule. The
/// neighborhood reassigns, unassigns or assigns one order, plus pairs of such
/// moves; a move is accepted only when it is strictly preferable. At a local
/// optimum the best schedule is perturbed (seeded), repaired and descended
/// again until the budget or the stall limit is reached.
SolveResult solveLocalSearch(const std::vector<Order>& orders, const PlantConfig& plant,
                             const LocalSearchOptions& options);

SolveResult solveLocalSearch(const std::vector<Order>& orders, const PlantConfig& plant, std::uint64_t seed,
                             std::uint64_t budget);

/// Oracle when the space fits under `limit`, local search otherwise.
SolveResult solveAuto(const std::vector<Order>& orders, const PlantConfig& plant, std::uint64_t seed,
                      std::uint64_t budget, std::uint64_t limit = 100'000);

} // namespace millrun::solve
