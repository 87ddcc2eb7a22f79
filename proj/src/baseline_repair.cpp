#include "nlns/baseline_repair.hpp"

#include <algorithm>
#include <stdexcept>

namespace nlns {

namespace {

struct Candidate {
    double cost;
    int tour;  // -1 opens a new tour
    int slot;  // insertion position within the tour
};

double depot_distance(const Instance& instance, int node) {
    return instance.travel_cost(0, node);
}

}  // namespace

Solution handcrafted_repair(const Instance& instance, DestroyedSolution destroyed,
                            const InsertionConfig& config, Rng& rng) {
    if (!(config.greediness > 0.0 && config.greediness <= 1.0))
        throw std::invalid_argument("greediness must be in (0, 1]");

    Solution solution;
    solution.tours = std::move(destroyed.complete_tours);
    std::vector<Visit> pool;
    for (auto& f : destroyed.fragments) {
        if (f.singleton()) {
            pool.push_back(f.visits.front());
        } else {
            // keep the piece's internal edges; close it into a tour
            if (f.depot == DepotEnd::Back) std::reverse(f.visits.begin(), f.visits.end());
            solution.tours.push_back(Tour{std::move(f.visits)});
        }
    }

    // one ordering criterion per repair call
    switch (rng.uniform_int(0, 2)) {
        case 0:
            std::stable_sort(pool.begin(), pool.end(),
                             [](const Visit& a, const Visit& b) { return a.quantity > b.quantity; });
            break;
        case 1:
            std::stable_sort(pool.begin(), pool.end(), [&](const Visit& a, const Visit& b) {
                return depot_distance(instance, a.node) > depot_distance(instance, b.node);
            });
            break;
        default:
            for (size_t i = pool.size(); i > 1; --i)
                std::swap(pool[i - 1], pool[rng.index(i)]);
            break;
    }

    std::vector<int> loads(solution.tours.size());
    for (size_t t = 0; t < solution.tours.size(); ++t) loads[t] = solution.tours[t].load();

    for (const Visit& visit : pool) {
        std::vector<Candidate> candidates;
        for (size_t t = 0; t < solution.tours.size(); ++t) {
            if (loads[t] + visit.quantity > instance.capacity()) continue;
            const auto& visits = solution.tours[t].visits;
            bool already_there = false;
            for (const auto& v : visits)
                if (v.node == visit.node) already_there = true;
            if (already_there) continue;  // one visit per customer and tour
            for (size_t s = 0; s <= visits.size(); ++s) {
                int prev = s == 0 ? 0 : visits[s - 1].node;
                int next = s == visits.size() ? 0 : visits[s].node;
                double delta = instance.travel_cost(prev, visit.node) +
                               instance.travel_cost(visit.node, next) -
                               instance.travel_cost(prev, next);
                candidates.push_back({delta, static_cast<int>(t), static_cast<int>(s)});
            }
        }
        candidates.push_back({2.0 * depot_distance(instance, visit.node), -1, 0});
        std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.cost != b.cost) return a.cost < b.cost;
            if (a.tour != b.tour) return a.tour < b.tour;
            return a.slot < b.slot;
        });

        const Candidate* chosen = &candidates.front();
        for (const auto& c : candidates) {
            if (rng.chance(config.greediness)) {
                chosen = &c;
                break;
            }
        }
        if (chosen->tour < 0) {
            solution.tours.push_back(Tour{{visit}});
            loads.push_back(visit.quantity);
        } else {
            auto& visits = solution.tours[chosen->tour].visits;
            visits.insert(visits.begin() + chosen->slot, visit);
            loads[chosen->tour] += visit.quantity;
        }
    }

    solution.cost = solution_cost(instance, solution);
    return solution;
}

Solution random_repair(const Instance& instance, DestroyedSolution destroyed, Rng& rng) {
    return RandomRepair{}.repair(instance, std::move(destroyed), rng);
}

}  // namespace nlns
