#include "nlns/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlns {

namespace {

constexpr double kGrid = 1000.0;
constexpr double kClusterScale = 40.0;  // exponential scatter around cluster seeds

int default_uniform_capacity(int n) {
    switch (n) {
        case 20: return 30;
        case 50: return 40;
        case 100: return 50;
        default: return 0;
    }
}

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

std::string GeneratorSpec::id() const {
    std::string s = xe_style ? "xe" : "uniform";
    s += ":" + std::to_string(num_customers);
    if (variant == Variant::SDVRP) s += ":sdvrp";
    if (xe_style || capacity != 0) s += ":q" + std::to_string(capacity);
    if (xe_style) {
        const char* dep = depot == DepotPlacement::Random ? "R"
                          : depot == DepotPlacement::Eccentric ? "E"
                                                               : "C";
        s += std::string(":") + dep;
        switch (positioning) {
            case CustomerPositioning::Random: s += ":R"; break;
            case CustomerPositioning::Clustered: s += ":C" + std::to_string(cluster_seeds); break;
            case CustomerPositioning::MixedRandomClustered:
                s += ":RC" + std::to_string(cluster_seeds);
                break;
        }
        switch (demand) {
            case DemandCode::Unit: s += ":U"; break;
            case DemandCode::Quartile: s += ":Q"; break;
            case DemandCode::SmallLarge: s += ":SL"; break;
            case DemandCode::Range:
                s += ":" + std::to_string(demand_min) + "-" + std::to_string(demand_max);
                break;
        }
    } else if (demand_min != 1 || demand_max != 9) {
        s += ":" + std::to_string(demand_min) + "-" + std::to_string(demand_max);
    }
    return s;
}

GeneratorSpec uniform_spec(int num_customers, Variant variant) {
    GeneratorSpec spec;
    spec.num_customers = num_customers;
    spec.variant = variant;
    spec.capacity = default_uniform_capacity(num_customers);
    return spec;
}

GeneratorSpec xe_group_spec(int group) {
    struct Row {
        int customers;
        char depot;
        char pos;   // 'R', 'C', 'M' (mixed)
        int seeds;
        const char* dem;
        int capacity;
    };
    // characteristics of the 17 groups: customers, depot, positioning,
    // cluster seeds, demand code, capacity
    static const Row rows[17] = {
        {100, 'R', 'M', 7, "1-100", 206},  {124, 'R', 'C', 5, "Q", 188},
        {128, 'E', 'M', 8, "1-10", 39},    {161, 'C', 'M', 8, "50-100", 1174},
        {180, 'R', 'C', 6, "U", 8},        {185, 'R', 'R', 0, "50-100", 974},
        {199, 'R', 'C', 8, "Q", 402},      {203, 'C', 'M', 6, "50-100", 836},
        {213, 'C', 'C', 4, "1-100", 944},  {218, 'E', 'R', 0, "U", 3},
        {236, 'E', 'R', 0, "U", 18},       {241, 'E', 'R', 0, "1-10", 28},
        {269, 'C', 'M', 5, "50-100", 585}, {274, 'R', 'C', 3, "U", 10},
        {279, 'E', 'R', 0, "SL", 192},     {293, 'C', 'R', 0, "1-100", 285},
        {297, 'R', 'R', 0, "1-100", 55},
    };
    if (group < 1 || group > 17) throw std::invalid_argument("XE group must be in 1..17");
    const Row& r = rows[group - 1];

    GeneratorSpec spec;
    spec.xe_style = true;
    spec.rounding = CostRounding::NearestInteger;
    spec.num_customers = r.customers;
    spec.capacity = r.capacity;
    spec.depot = r.depot == 'R'   ? DepotPlacement::Random
                 : r.depot == 'E' ? DepotPlacement::Eccentric
                                  : DepotPlacement::Central;
    spec.positioning = r.pos == 'R'   ? CustomerPositioning::Random
                       : r.pos == 'C' ? CustomerPositioning::Clustered
                                      : CustomerPositioning::MixedRandomClustered;
    spec.cluster_seeds = r.seeds;
    std::string dem = r.dem;
    if (dem == "U") {
        spec.demand = DemandCode::Unit;
    } else if (dem == "Q") {
        spec.demand = DemandCode::Quartile;
    } else if (dem == "SL") {
        spec.demand = DemandCode::SmallLarge;
    } else {
        spec.demand = DemandCode::Range;
        auto dash = dem.find('-');
        spec.demand_min = std::stoi(dem.substr(0, dash));
        spec.demand_max = std::stoi(dem.substr(dash + 1));
    }
    return spec;
}

Instance generate_instance(const GeneratorSpec& spec, Rng& rng) {
    if (spec.num_customers < 1) throw std::invalid_argument("need at least one customer");
    const int n = spec.num_customers;

    std::vector<Point> nodes(n + 1);
    std::vector<int> demands(n + 1, 0);

    if (!spec.xe_style) {
        int capacity = spec.capacity != 0 ? spec.capacity : default_uniform_capacity(n);
        if (capacity == 0)
            throw std::invalid_argument(
                "no capacity convention for this size; set capacity explicitly");
        nodes[0] = {rng.uniform(), rng.uniform()};
        for (int i = 1; i <= n; ++i) nodes[i] = {rng.uniform(), rng.uniform()};
        for (int i = 1; i <= n; ++i) demands[i] = rng.uniform_int(spec.demand_min, spec.demand_max);
        if (spec.demand_max > capacity)
            throw std::invalid_argument("demand range exceeds vehicle capacity");
        return Instance(std::move(nodes), std::move(demands), capacity, spec.variant,
                        spec.rounding, spec.id());
    }

    if (spec.capacity < 1) throw std::invalid_argument("XE-style specs need an explicit capacity");

    switch (spec.depot) {
        case DepotPlacement::Random:
            nodes[0] = {static_cast<double>(rng.uniform_int(0, 1000)),
                        static_cast<double>(rng.uniform_int(0, 1000))};
            break;
        case DepotPlacement::Eccentric: nodes[0] = {0, 0}; break;
        case DepotPlacement::Central: nodes[0] = {500, 500}; break;
    }

    // cluster seed points for C(s)/RC(s) positioning
    std::vector<Point> seeds;
    if (spec.positioning != CustomerPositioning::Random) {
        if (spec.cluster_seeds < 1)
            throw std::invalid_argument("clustered positioning needs seed points");
        for (int s = 0; s < spec.cluster_seeds; ++s)
            seeds.push_back({static_cast<double>(rng.uniform_int(0, 1000)),
                             static_cast<double>(rng.uniform_int(0, 1000))});
    }
    auto clustered_point = [&]() -> Point {
        const Point& c = seeds[rng.index(seeds.size())];
        double r = -kClusterScale * std::log(1.0 - rng.uniform());
        double a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        return {std::round(clip(c.x + r * std::cos(a), 0.0, kGrid)),
                std::round(clip(c.y + r * std::sin(a), 0.0, kGrid))};
    };
    for (int i = 1; i <= n; ++i) {
        bool cluster = spec.positioning == CustomerPositioning::Clustered ||
                       (spec.positioning == CustomerPositioning::MixedRandomClustered &&
                        rng.chance(0.5));
        nodes[i] = cluster ? clustered_point()
                           : Point{static_cast<double>(rng.uniform_int(0, 1000)),
                                   static_cast<double>(rng.uniform_int(0, 1000))};
    }

    if (spec.demand == DemandCode::Range && spec.demand_min > spec.capacity)
        throw std::invalid_argument("demand range and capacity are jointly unsatisfiable");

    switch (spec.demand) {
        case DemandCode::Unit:
            for (int i = 1; i <= n; ++i) demands[i] = 1;
            break;
        case DemandCode::Range:
            for (int i = 1; i <= n; ++i)
                demands[i] = rng.uniform_int(spec.demand_min, spec.demand_max);
            break;
        case DemandCode::Quartile: {
            // one quadrant of the grid gets the large demands
            int qx = rng.uniform_int(0, 1);
            int qy = rng.uniform_int(0, 1);
            for (int i = 1; i <= n; ++i) {
                bool in_quadrant = (nodes[i].x >= 500.0) == (qx == 1) &&
                                   (nodes[i].y >= 500.0) == (qy == 1);
                demands[i] = in_quadrant ? rng.uniform_int(50, 100) : rng.uniform_int(1, 10);
            }
            break;
        }
        case DemandCode::SmallLarge: {
            double small_share = rng.uniform(0.70, 0.95);
            for (int i = 1; i <= n; ++i)
                demands[i] =
                    rng.chance(small_share) ? rng.uniform_int(1, 10) : rng.uniform_int(50, 100);
            break;
        }
    }
    // a few published groups quote demand ranges above their capacity; draws
    // are capped so every single customer stays serviceable
    for (int i = 1; i <= n; ++i) demands[i] = std::min(demands[i], spec.capacity);

    return Instance(std::move(nodes), std::move(demands), spec.capacity, spec.variant,
                    spec.rounding, spec.id());
}

std::vector<Instance> generate(const GeneratorSpec& spec, int count, uint64_t seed) {
    std::vector<Instance> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        Rng rng(seed, static_cast<uint64_t>(i));
        out.push_back(generate_instance(spec, rng));
    }
    return out;
}

}  // namespace nlns
