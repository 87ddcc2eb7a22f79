#pragma once

#include <string>
#include <vector>

#include "nlns/instance.hpp"
#include "nlns/rng.hpp"

namespace nlns {

enum class DepotPlacement { Random, Eccentric, Central };
enum class CustomerPositioning { Random, Clustered, MixedRandomClustered };
enum class DemandCode { Range, Unit, Quartile, SmallLarge };

// Describes an instance distribution: either the uniform unit-square classes
// used by the machine-learning benchmarks or an XE-style class defined by
// depot placement, customer positioning, demand code and capacity on a
// 1000x1000 grid.
struct GeneratorSpec {
    int num_customers = 20;
    Variant variant = Variant::CVRP;
    CostRounding rounding = CostRounding::Exact;
    bool xe_style = false;
    int capacity = 0;  // 0 picks the uniform-class convention (30/40/50)

    DepotPlacement depot = DepotPlacement::Random;
    CustomerPositioning positioning = CustomerPositioning::Random;
    int cluster_seeds = 0;
    DemandCode demand = DemandCode::Range;
    int demand_min = 1;
    int demand_max = 9;

    std::string id() const;
};

// uniform class: coordinates on the unit square, integer demands in [1, 9],
// capacity 30/40/50 for 20/50/100 customers
GeneratorSpec uniform_spec(int num_customers, Variant variant = Variant::CVRP);

// the 17 XE-style groups (1-based), matching their published characteristics
GeneratorSpec xe_group_spec(int group);

Instance generate_instance(const GeneratorSpec& spec, Rng& rng);

// deterministic batch generation: instance i derives its own stream of `seed`
std::vector<Instance> generate(const GeneratorSpec& spec, int count, uint64_t seed);

}  // namespace nlns
