#include "nlns/solution.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace nlns {

double tour_cost(const Instance& instance, const Tour& tour) {
    if (tour.visits.empty()) return 0.0;
    double c = instance.travel_cost(0, tour.visits.front().node);
    for (size_t i = 0; i + 1 < tour.visits.size(); ++i)
        c += instance.travel_cost(tour.visits[i].node, tour.visits[i + 1].node);
    c += instance.travel_cost(tour.visits.back().node, 0);
    return c;
}

double solution_cost(const Instance& instance, const Solution& solution) {
    double c = 0.0;
    for (const auto& t : solution.tours) c += tour_cost(instance, t);
    return c;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (const auto& v : violations) out << v.where << ": " << v.what << "\n";
    return out.str();
}

ValidationReport validate(const Instance& instance, const Solution& solution) {
    ValidationReport report;
    auto flag = [&](std::string where, std::string what) {
        report.violations.push_back({std::move(where), std::move(what)});
    };

    std::vector<int> delivered(instance.num_nodes(), 0);
    for (size_t ti = 0; ti < solution.tours.size(); ++ti) {
        const Tour& tour = solution.tours[ti];
        std::string where = "tour " + std::to_string(ti);
        if (tour.visits.empty()) {
            flag(where, "empty tour");
            continue;
        }
        std::vector<int> seen;
        int load = 0;
        for (const auto& v : tour.visits) {
            if (v.node < 1 || v.node >= instance.num_nodes()) {
                flag(where, "invalid node index " + std::to_string(v.node));
                continue;
            }
            if (v.quantity < 1)
                flag(where, "non-positive delivery at customer " + std::to_string(v.node));
            for (int s : seen)
                if (s == v.node) {
                    flag(where, "customer " + std::to_string(v.node) + " visited twice in one tour");
                    break;
                }
            seen.push_back(v.node);
            load += v.quantity;
            delivered[v.node] += v.quantity;
        }
        if (load > instance.capacity())
            flag(where, "load " + std::to_string(load) + " exceeds capacity " +
                            std::to_string(instance.capacity()));
    }

    for (int c = 1; c < instance.num_nodes(); ++c) {
        std::string where = "customer " + std::to_string(c);
        if (delivered[c] != instance.demand(c))
            flag(where, "delivered " + std::to_string(delivered[c]) + " of demand " +
                            std::to_string(instance.demand(c)));
    }
    if (instance.variant() == Variant::CVRP) {
        std::vector<int> visits(instance.num_nodes(), 0);
        for (const auto& t : solution.tours)
            for (const auto& v : t.visits)
                if (v.node >= 1 && v.node < instance.num_nodes()) ++visits[v.node];
        for (int c = 1; c < instance.num_nodes(); ++c)
            if (visits[c] > 1)
                flag("customer " + std::to_string(c),
                     "visited by " + std::to_string(visits[c]) + " tours in CVRP");
    }

    double recomputed = solution_cost(instance, solution);
    if (std::abs(recomputed - solution.cost) > 1e-6)
        flag("solution", "cached cost " + std::to_string(solution.cost) +
                             " differs from recomputed " + std::to_string(recomputed));
    return report;
}

Solution greedy_construct(const Instance& instance) {
    const int n = instance.num_nodes();
    std::vector<bool> visited(n, false);
    int remaining = instance.num_customers();

    Solution solution;
    Tour current;
    int position = 0;  // depot
    int load = 0;

    while (remaining > 0) {
        int best = -1;
        double best_cost = 0;
        for (int c = 1; c < n; ++c) {
            if (visited[c]) continue;
            double d = instance.travel_cost(position, c);
            if (best == -1 || d < best_cost) {  // ties resolved by lowest index
                best = c;
                best_cost = d;
            }
        }
        if (load + instance.demand(best) > instance.capacity()) {
            solution.tours.push_back(std::move(current));
            current = Tour{};
            position = 0;
            load = 0;
            continue;  // reselect the closest customer from the depot
        }
        current.visits.push_back({best, instance.demand(best)});
        visited[best] = true;
        load += instance.demand(best);
        position = best;
        --remaining;
    }
    if (!current.visits.empty()) solution.tours.push_back(std::move(current));
    solution.cost = solution_cost(instance, solution);
    return solution;
}

}  // namespace nlns
