#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlns/rng.hpp"
#include "nlns/solution.hpp"

namespace nlns {

enum class DestroyProcedure { PointBased, TourBased };

// A destroy operator: which procedure to run and which fraction of the
// customers to remove (the degree of destruction).
struct DestroyOperatorSpec {
    DestroyProcedure procedure = DestroyProcedure::PointBased;
    double degree = 0.2;

    std::string id() const;
};

// Which end of a fragment carries the depot. The depot never sits in the
// interior of a fragment.
enum class DepotEnd : uint8_t { None, Front, Back };

// An incomplete tour produced by destruction: a customer sequence, possibly
// attached to the depot at one end.
struct Fragment {
    std::vector<Visit> visits;
    DepotEnd depot = DepotEnd::None;

    bool contains_depot() const { return depot != DepotEnd::None; }
    bool singleton() const { return visits.size() == 1 && depot == DepotEnd::None; }

    int fulfilled() const {
        int s = 0;
        for (const auto& v : visits) s += v.quantity;
        return s;
    }

    // open (non-depot) ends; a lone customer counts both sides
    int open_ends() const { return contains_depot() ? 1 : 2; }
};

// A solution in destroyed state: the tours the destroy left alone plus the
// fragments it created.
struct DestroyedSolution {
    std::vector<Tour> complete_tours;
    std::vector<Fragment> fragments;
};

// Number of customers a destroy with the given degree removes.
int removal_count(int num_customers, double degree);

// Removes the k customers nearest to a point drawn uniformly from the node
// bounding box. Every removal splits its tour; empty pieces are discarded.
DestroyedSolution point_destroy(const Instance& instance, const Solution& solution,
                                const DestroyOperatorSpec& spec, Rng& rng);

// Removes whole tours in order of their distance to a random point until at
// least k customer visits are gone; each removed tour of r customers leaves
// r single-customer fragments.
DestroyedSolution tour_destroy(const Instance& instance, const Solution& solution,
                               const DestroyOperatorSpec& spec, Rng& rng);

DestroyedSolution apply_destroy(const Instance& instance, const Solution& solution,
                                const DestroyOperatorSpec& spec, Rng& rng);

// Total length of the edges that still exist in the destroyed solution
// (complete tours plus fragment-internal and fragment-depot edges).
double destroyed_cost(const Instance& instance, const DestroyedSolution& destroyed);

// Default operator set: two degrees per destroy procedure.
std::vector<DestroyOperatorSpec> default_destroy_specs();

DestroyOperatorSpec parse_destroy_spec(const std::string& text);

}  // namespace nlns
