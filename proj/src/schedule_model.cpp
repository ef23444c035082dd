#include "millrun/schedule_model.hpp"

#include <cmath>
#include <stdexcept>

namespace millrun::schedule {

Assignment Assignment::fromChoices(const std::vector<int>& choices, std::size_t machines) {
	Assignment x(choices.size(), machines);
	for (std::size_t i = 0; i < choices.size(); ++i) {
		x.assign(i, choices[i]);
	}
	return x;
}

void Assignment::assign(std::size_t i, int machine) {
	for (std::size_t j = 0; j < machines(); ++j) {
		x_(i, j) = 0;
	}
	if (machine != kUnassigned) {
		if (machine < 0 || static_cast<std::size_t>(machine) >= machines()) {
			throw std::out_of_range("assignment: machine index " + std::to_string(machine) + " out of range");
		}
		x_(i, static_cast<std::size_t>(machine)) = 1;
	}
}

int Assignment::rowSum(std::size_t i) const {
	int sum = 0;
	for (std::size_t j = 0; j < machines(); ++j) {
		sum += x_(i, j);
	}
	return sum;
}

int Assignment::machineOf(std::size_t i) const {
	for (std::size_t j = 0; j < machines(); ++j) {
		if (x_(i, j)) {
			return static_cast<int>(j);
		}
	}
	return kUnassigned;
}

std::vector<int> Assignment::choices() const {
	std::vector<int> out(orders());
	for (std::size_t i = 0; i < orders(); ++i) {
		out[i] = machineOf(i);
	}
	return out;
}

std::vector<int> Assignment::unassignedIds() const {
	std::vector<int> ids;
	for (std::size_t i = 0; i < orders(); ++i) {
		if (!isAssigned(i)) {
			ids.push_back(static_cast<int>(i) + 1);
		}
	}
	return ids;
}

std::string toString(Constraint c) {
	switch (c) {
	case Constraint::Assignment:
		return "assignment";
	case Constraint::DueDate:
		return "due_date";
	case Constraint::Warehouse:
		return "warehouse";
	}
	return "unknown";
}

std::size_t ScheduleEvaluation::unservedCount() const {
	std::size_t count = 0;
	for (double tp : processing_per_order) {
		count += tp == 0.0 ? 1 : 0;
	}
	return count;
}

bool strictlyBelow(double a, double b, double eps) {
	return a < b && b - a >= eps;
}

ProcessingTimes processingMatrix(const std::vector<Order>& orders, const std::vector<Machine>& machines,
                                 const Assignment& x) {
	ProcessingTimes out{Matrix<double>(orders.size(), machines.size()), std::vector<double>(orders.size(), 0.0)};
	for (std::size_t i = 0; i < orders.size(); ++i) {
		for (std::size_t j = 0; j < machines.size(); ++j) {
			if (x.at(i, j)) {
				out.per_machine(i, j) = processingTime(orders[i], machines[j]);
				out.per_order[i] += out.per_machine(i, j);
			}
		}
	}
	return out;
}

CompletionTimes completionTimes(const std::vector<Order>& orders, const std::vector<Machine>& machines,
                                const Assignment& x) {
	CompletionTimes out{Matrix<double>(orders.size(), machines.size()), std::vector<double>(orders.size(), 0.0)};
	for (std::size_t j = 0; j < machines.size(); ++j) {
		double clock = 0.0;
		for (std::size_t i = 0; i < orders.size(); ++i) {
			if (x.at(i, j)) {
				clock += processingTime(orders[i], machines[j]);
				out.order_finish[i] += clock;
			}
			out.finish(i, j) = clock;
		}
	}
	return out;
}

SlackResult slacks(const std::vector<Order>& orders, const std::vector<double>& order_finish, double hours_per_day,
                   const std::vector<bool>& assigned, double eps) {
	SlackResult out{std::vector<double>(orders.size()), {}};
	for (std::size_t i = 0; i < orders.size(); ++i) {
		out.slack[i] = hours_per_day * orders[i].dueDays() - order_finish[i];
		if (assigned[i] && !(out.slack[i] > 0.0 && out.slack[i] >= eps)) {
			out.violations.push_back({Constraint::DueDate, orders[i].id(), out.slack[i]});
		}
	}
	return out;
}

Matrix<std::uint8_t> interactionMatrix(const std::vector<double>& order_finish, const std::vector<double>& due_hours,
                                       const std::vector<bool>& assigned, double eps, bool ties_interact) {
	const std::size_t n = order_finish.size();
	if (due_hours.size() != n || assigned.size() != n) {
		throw std::invalid_argument("interaction matrix: finish, due and assigned vectors differ in length");
	}
	Matrix<std::uint8_t> lambda(n, n, 0);
	for (std::size_t i = 0; i < n; ++i) {
		if (!assigned[i]) {
			continue;
		}
		for (std::size_t k = i + 1; k < n; ++k) {
			if (!assigned[k]) {
				continue;
			}
			const double li = order_finish[i];
			const double lk = order_finish[k];
			const bool tie = li == lk || std::abs(li - lk) < eps;
			const bool k_enters_during_i = strictlyBelow(li, lk, eps) && strictlyBelow(lk, due_hours[i], eps);
			const bool i_enters_during_k = strictlyBelow(lk, li, eps) && strictlyBelow(li, due_hours[k], eps);
			const bool interacts = (tie && ties_interact) || k_enters_during_i || i_enters_during_k;
			lambda(i, k) = lambda(k, i) = interacts ? 1 : 0;
		}
	}
	return lambda;
}

OccupancyResult occupancy(const std::vector<Order>& orders, const Assignment& x,
                          const Matrix<std::uint8_t>& interaction, double capacity_kg) {
	const std::size_t n = orders.size();
	OccupancyResult out{std::vector<double>(n, 0.0), {}};
	for (std::size_t i = 0; i < n; ++i) {
		const int row = x.rowSum(i);
		if (row == 0) {
			continue;
		}
		double resident = orders[i].quantity();
		for (std::size_t k = 0; k < n; ++k) {
			if (interaction(i, k)) {
				resident += orders[k].quantity();
			}
		}
		out.occupancy[i] = static_cast<double>(row) * resident;
		if (out.occupancy[i] > capacity_kg) {
			out.violations.push_back({Constraint::Warehouse, orders[i].id(), out.occupancy[i]});
		}
	}
	return out;
}

double objective(const std::vector<Order>& orders, const Assignment& x) {
	double z = 0.0;
	for (std::size_t i = 0; i < orders.size(); ++i) {
		z += orders[i].quantity() * static_cast<double>(x.rowSum(i));
	}
	return z;
}

ScheduleEvaluation evaluate(const std::vector<Order>& orders, const PlantConfig& plant, const Assignment& x) {
	if (x.orders() != orders.size() || x.machines() != plant.machines.size()) {
		throw std::invalid_argument("evaluate: assignment is " + std::to_string(x.orders()) + "x" +
		                            std::to_string(x.machines()) + " but the problem has " +
		                            std::to_string(orders.size()) + " orders and " +
		                            std::to_string(plant.machines.size()) + " machines");
	}
	const std::size_t n = orders.size();
	ScheduleEvaluation ev;

	std::vector<bool> assigned(n);
	std::vector<double> due_hours(n);
	for (std::size_t i = 0; i < n; ++i) {
		const int row = x.rowSum(i);
		assigned[i] = row > 0;
		due_hours[i] = plant.hours_per_day * orders[i].dueDays();
		if (row > 1) {
			ev.violations.push_back({Constraint::Assignment, orders[i].id(), static_cast<double>(row)});
		}
	}

	auto processing = processingMatrix(orders, plant.machines, x);
	ev.processing = std::move(processing.per_machine);
	ev.processing_per_order = std::move(processing.per_order);

	auto completion = completionTimes(orders, plant.machines, x);
	ev.finish = std::move(completion.finish);
	ev.order_finish = std::move(completion.order_finish);

	auto slack = slacks(orders, ev.order_finish, plant.hours_per_day, assigned, plant.slack_epsilon);
	ev.slack = std::move(slack.slack);

	ev.interaction = interactionMatrix(ev.order_finish, due_hours, assigned, plant.slack_epsilon, plant.ties_interact);

	auto occ = occupancy(orders, x, ev.interaction, plant.warehouse_capacity_kg);
	ev.occupancy = std::move(occ.occupancy);

	ev.objective = objective(orders, x);

	ev.violations.insert(ev.violations.end(), slack.violations.begin(), slack.violations.end());
	ev.violations.insert(ev.violations.end(), occ.violations.begin(), occ.violations.end());
	ev.feasible = ev.violations.empty();
	return ev;
}

} // namespace millrun::schedule
