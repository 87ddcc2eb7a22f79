#pragma once

#include <string>
#include <vector>

#include "nlns/instance.hpp"

namespace nlns {

// One stop of a tour: the visited customer and the quantity delivered there.
// Quantity equals the full demand in CVRP and may be partial in SDVRP.
struct Visit {
    int node = 0;
    int quantity = 0;

    bool operator==(const Visit&) const = default;
};

// A vehicle tour. The depot is implicit at both ends; `visits` holds the
// customers in visiting order.
struct Tour {
    std::vector<Visit> visits;

    int load() const {
        int s = 0;
        for (const auto& v : visits) s += v.quantity;
        return s;
    }

    bool operator==(const Tour&) const = default;
};

struct Solution {
    std::vector<Tour> tours;
    double cost = 0;  // cached; kept equal to solution_cost by construction

    bool operator==(const Solution&) const = default;
};

double tour_cost(const Instance& instance, const Tour& tour);

// Recomputes the objective from scratch under the instance's rounding mode.
double solution_cost(const Instance& instance, const Solution& solution);

struct Violation {
    std::string where;
    std::string what;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks the solution invariants for the instance's variant. Violations are
// data, not errors: every broken constraint is reported with its location.
ValidationReport validate(const Instance& instance, const Solution& solution);

// Builds a feasible starting solution: repeatedly extend the current tour
// with the unvisited customer closest to the current node; when its demand
// does not fit the remaining load, return to the depot and start a new tour.
// Ties go to the lowest node index. SDVRP uses full-demand deliveries here.
Solution greedy_construct(const Instance& instance);

}  // namespace nlns
