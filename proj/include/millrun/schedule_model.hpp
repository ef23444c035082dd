#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "millrun/core_model.hpp"

namespace millrun::schedule {

/// Dense row-major matrix.
template <typename T>
class Matrix {
public:
	Matrix() = default;
	Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }

	T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
	const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

	const std::vector<T>& data() const { return data_; }

	bool operator==(const Matrix&) const = default;

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<T> data_;
};

/// Binary decision matrix: x(i, j) == 1 iff order i runs on machine j.
/// A row may hold more than one 1; evaluate() reports that as an assignment violation.
class Assignment {
public:
	static constexpr int kUnassigned = -1;

	Assignment() = default;
	Assignment(std::size_t orders, std::size_t machines) : x_(orders, machines, 0) {}

	/// choices[i] is a 0-based machine index or kUnassigned.
	static Assignment fromChoices(const std::vector<int>& choices, std::size_t machines);

	std::size_t orders() const { return x_.rows(); }
	std::size_t machines() const { return x_.cols(); }

	bool at(std::size_t i, std::size_t j) const { return x_(i, j) != 0; }
	void set(std::size_t i, std::size_t j, bool value) { x_(i, j) = value ? 1 : 0; }

	/// Clears row i, then places order i on `machine` (or leaves it unassigned).
	void assign(std::size_t i, int machine);

	int rowSum(std::size_t i) const;
	bool isAssigned(std::size_t i) const { return rowSum(i) > 0; }

	/// Machine index of a well-formed row, kUnassigned for a zero row.
	int machineOf(std::size_t i) const;
	std::vector<int> choices() const;

	/// 1-based ids (position + 1) of zero rows.
	std::vector<int> unassignedIds() const;

	const Matrix<std::uint8_t>& matrix() const { return x_; }

	bool operator==(const Assignment&) const = default;
	/// Row-major lexicographic order on the bits of x.
	bool lexLess(const Assignment& other) const { return x_.data() < other.x_.data(); }

private:
	Matrix<std::uint8_t> x_;
};

enum class Constraint { Assignment, DueDate, Warehouse };
std::string toString(Constraint c);

struct Violation {
	Constraint constraint;
	int order_id;
	double amount; // row sum, slack or occupancy depending on the constraint

	bool operator==(const Violation&) const = default;
};

struct ProcessingTimes {
	Matrix<double> per_machine; // T
	std::vector<double> per_order; // Tp
};

struct CompletionTimes {
	Matrix<double> finish; // F, machine clocks
	std::vector<double> order_finish; // L; 0 for unassigned orders
};

struct SlackResult {
	std::vector<double> slack; // H = h E - L
	std::vector<Violation> violations;
};

struct OccupancyResult {
	std::vector<double> occupancy; // O, kg
	std::vector<Violation> violations;
};

struct ScheduleEvaluation {
	Matrix<double> processing;       // T
	std::vector<double> processing_per_order; // Tp
	Matrix<double> finish;           // F
	std::vector<double> order_finish; // L
	std::vector<double> slack;       // H
	Matrix<std::uint8_t> interaction; // lambda
	std::vector<double> occupancy;   // O
	double objective = 0.0;          // Z
	bool feasible = true;
	std::vector<Violation> violations;

	std::size_t unservedCount() const;
};

/// Strict comparisons with tolerance eps: a is below b by at least eps.
bool strictlyBelow(double a, double b, double eps);

ProcessingTimes processingMatrix(const std::vector<Order>& orders, const std::vector<Machine>& machines,
                                 const Assignment& x);

/// Machine-local clocks in order-id sequence:
/// F(i, j) = F(i-1, j) + x(i, j) (s_j + Q_i / tau_j), F(-1, j) = 0, and
/// L_i = sum_j x(i, j) F(i, j).
CompletionTimes completionTimes(const std::vector<Order>& orders, const std::vector<Machine>& machines,
                                const Assignment& x);

/// H_i = h E_i - L_i. Assigned orders need H_i >= eps (and > 0).
SlackResult slacks(const std::vector<Order>& orders, const std::vector<double>& order_finish, double hours_per_day,
                   const std::vector<bool>& assigned, double eps);

/// lambda(i, k) = 1 iff L_i < L_k < D_i or L_k < L_i < D_k, D in hours.
/// Unassigned orders never interact; equal finish times interact when
/// ties_interact is set.
Matrix<std::uint8_t> interactionMatrix(const std::vector<double>& order_finish, const std::vector<double>& due_hours,
                                       const std::vector<bool>& assigned, double eps, bool ties_interact);

/// O_i = (sum_j x_ij) (sum_k lambda_ik Q_k + Q_i), bounded by capacity_kg.
OccupancyResult occupancy(const std::vector<Order>& orders, const Assignment& x,
                          const Matrix<std::uint8_t>& interaction, double capacity_kg);

/// Z = sum_i Q_i sum_j x_ij
double objective(const std::vector<Order>& orders, const Assignment& x);

/// Full evaluation. Orders are processed in vector order (ids 1..n).
/// Throws std::invalid_argument on a dimension mismatch.
ScheduleEvaluation evaluate(const std::vector<Order>& orders, const PlantConfig& plant, const Assignment& x);

} // namespace millrun::schedule
