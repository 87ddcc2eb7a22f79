#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlns/generator.hpp"
#include "nlns/instance_io.hpp"
#include "nlns/run_record.hpp"
#include "oracles.hpp"

using namespace nlns;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("uniform generator: determinism, ranges, capacity convention") {
    auto a = generate(uniform_spec(20), 5, 99);
    auto b = generate(uniform_spec(20), 5, 99);
    REQUIRE(a.size() == 5);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].capacity() == 30);
        for (int n = 0; n < a[i].num_nodes(); ++n) {
            CHECK(a[i].position(n).x == b[i].position(n).x);
            CHECK(a[i].position(n).y == b[i].position(n).y);
            CHECK(a[i].demand(n) == b[i].demand(n));
            CHECK(a[i].position(n).x >= 0.0);
            CHECK(a[i].position(n).x <= 1.0);
            if (n > 0) {
                CHECK(a[i].demand(n) >= 1);
                CHECK(a[i].demand(n) <= 9);
            }
        }
    }
    CHECK(generate(uniform_spec(50), 1, 1)[0].capacity() == 40);
    CHECK(generate(uniform_spec(100), 1, 1)[0].capacity() == 50);
}

TEST_CASE("uniform demands average five over many customers") {
    auto instances = generate(uniform_spec(100), 1000, 4242);  // 1e5 customers
    double sum = 0;
    long count = 0;
    for (const auto& inst : instances)
        for (int c = 1; c < inst.num_nodes(); ++c) {
            sum += inst.demand(c);
            ++count;
        }
    CHECK(count == 100000);
    CHECK(std::abs(sum / count - 5.0) <= 0.1);
}

TEST_CASE("XE group specs follow the published characteristics") {
    auto spec = xe_group_spec(1);  // 100 customers, R depot, RC(7), 1-100, Q 206
    CHECK(spec.num_customers == 100);
    CHECK(spec.capacity == 206);
    CHECK(spec.positioning == CustomerPositioning::MixedRandomClustered);
    CHECK(spec.cluster_seeds == 7);

    Rng rng(3);
    Instance inst = generate_instance(spec, rng);
    CHECK(inst.num_customers() == 100);
    CHECK(inst.capacity() == 206);
    CHECK(inst.rounding() == CostRounding::NearestInteger);
    for (int c = 1; c < inst.num_nodes(); ++c) {
        CHECK(inst.demand(c) >= 1);
        CHECK(inst.demand(c) <= 100);
        CHECK(inst.position(c).x >= 0.0);
        CHECK(inst.position(c).x <= 1000.0);
    }
    CHECK_THROWS(xe_group_spec(0));
    CHECK_THROWS(xe_group_spec(18));
}

TEST_CASE("central depot code places the depot at the grid center") {
    auto spec = xe_group_spec(4);  // C depot
    Rng rng(8);
    Instance inst = generate_instance(spec, rng);
    CHECK(inst.position(0).x == 500.0);
    CHECK(inst.position(0).y == 500.0);

    auto ecc = xe_group_spec(10);  // E depot
    Rng rng2(8);
    Instance inst2 = generate_instance(ecc, rng2);
    CHECK(inst2.position(0).x == 0.0);
    CHECK(inst2.position(0).y == 0.0);
}

TEST_CASE("explicit demand ranges are respected") {
    GeneratorSpec spec;
    spec.xe_style = true;
    spec.num_customers = 100;
    spec.capacity = 500;
    spec.demand = DemandCode::Range;
    spec.demand_min = 50;
    spec.demand_max = 100;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        Instance inst = generate_instance(spec, rng);
        for (int c = 1; c < inst.num_nodes(); ++c) {
            CHECK(inst.demand(c) >= 50);
            CHECK(inst.demand(c) <= 100);
        }
    }
    // unit demands
    auto u = xe_group_spec(5);
    Rng rng(1);
    Instance inst = generate_instance(u, rng);
    for (int c = 1; c < inst.num_nodes(); ++c) CHECK(inst.demand(c) == 1);
}

TEST_CASE("native instance files round-trip losslessly") {
    Rng rng(17);
    GeneratorSpec spec = uniform_spec(20, Variant::SDVRP);
    spec.rounding = CostRounding::NearestInteger;
    Instance inst = generate_instance(spec, rng);
    auto path = tmp("nlns_native.json").string();
    write_instance(inst, path);
    Instance back = parse_instance(path);
    CHECK(back.num_nodes() == inst.num_nodes());
    CHECK(back.capacity() == inst.capacity());
    CHECK(back.variant() == inst.variant());
    CHECK(back.rounding() == inst.rounding());
    for (int n = 0; n < inst.num_nodes(); ++n) {
        CHECK(back.position(n).x == inst.position(n).x);
        CHECK(back.position(n).y == inst.position(n).y);
        CHECK(back.demand(n) == inst.demand(n));
    }
    std::filesystem::remove(path);
}

TEST_CASE("text-format instance files round-trip") {
    Rng rng(18);
    Instance inst = generate_instance(xe_group_spec(3), rng);
    auto path = tmp("nlns_tsplib.vrp").string();
    write_instance_tsplib(inst, path);
    Instance back = parse_instance(path);
    CHECK(back.num_nodes() == inst.num_nodes());
    CHECK(back.capacity() == inst.capacity());
    for (int n = 0; n < inst.num_nodes(); ++n) {
        CHECK(back.position(n).x == inst.position(n).x);
        CHECK(back.demand(n) == inst.demand(n));
    }
    std::filesystem::remove(path);
}

TEST_CASE("a hand-written text fixture parses to known values") {
    auto path = tmp("nlns_fixture.vrp").string();
    std::ofstream out(path);
    out << "NAME : tiny\n"
        << "TYPE : CVRP\n"
        << "DIMENSION : 4\n"
        << "EDGE_WEIGHT_TYPE : EUC_2D\n"
        << "CAPACITY : 10\n"
        << "NODE_COORD_SECTION\n"
        << "1 0 0\n"
        << "2 3 4\n"
        << "3 6 8\n"
        << "4 1 1\n"
        << "DEMAND_SECTION\n"
        << "1 0\n"
        << "2 4\n"
        << "3 5\n"
        << "4 1\n"
        << "DEPOT_SECTION\n"
        << "1\n"
        << "-1\n"
        << "EOF\n";
    out.close();
    Instance inst = parse_instance(path);
    CHECK(inst.name() == "tiny");
    CHECK(inst.num_customers() == 3);
    CHECK(inst.capacity() == 10);
    CHECK(inst.position(1).x == 3.0);
    CHECK(inst.demand(2) == 5);
    CHECK(inst.travel_cost(0, 1) == 5.0);  // text format defaults to rounded costs
    std::filesystem::remove(path);
}

TEST_CASE("malformed files report the offending line") {
    auto path = tmp("nlns_bad.vrp").string();
    std::ofstream out(path);
    out << "NAME : bad\n"
        << "DIMENSION : 3\n"
        << "EDGE_WEIGHT_TYPE : EUC_2D\n"
        << "CAPACITY : 10\n"
        << "NODE_COORD_SECTION\n"
        << "1 0 0\n"
        << "2 1 1\n"
        << "3 2 2\n"
        << "DEMAND_SECTION\n"
        << "1 0\n"
        << "2 1\n"
        << "9 1\n"  // line 12: demand for a node that does not exist
        << "DEPOT_SECTION\n1\n-1\nEOF\n";
    out.close();
    try {
        parse_instance(path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":12:") != std::string::npos);
        CHECK(std::string(e.what()).find("unknown node") != std::string::npos);
    }
    std::filesystem::remove(path);

    auto missing = tmp("nlns_missing_cap.vrp").string();
    std::ofstream out2(missing);
    out2 << "NAME : bad2\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\n"
         << "NODE_COORD_SECTION\n1 0 0\n2 1 1\nDEMAND_SECTION\n1 0\n2 1\nEOF\n";
    out2.close();
    CHECK_THROWS(parse_instance(missing));
    std::filesystem::remove(missing);
}

TEST_CASE("solution files carry tours, deliveries and cost") {
    Rng rng(19);
    Instance inst = generate_instance(uniform_spec(20), rng);
    Solution s = greedy_construct(inst);
    auto path = tmp("nlns_solution.txt").string();
    write_solution(inst, s, path);
    Solution back = read_solution(path);
    CHECK(back.tours == s.tours);
    CHECK(back.cost == s.cost);
    CHECK(validate(inst, back).ok());
    std::filesystem::remove(path);
}

TEST_CASE("run records format and hash deterministically") {
    RunRecord r;
    r.instance_id = "uniform20-000";
    r.seed = 7;
    r.method = "nlns";
    r.cost = 6.25;
    r.wall_s = 0;
    r.config_hash = config_hash("solve --iters 20");
    CHECK(to_csv(r) == "uniform20-000,7,nlns,6.25,0.000," + config_hash("solve --iters 20"));
    CHECK(config_hash("a") != config_hash("b"));
    CHECK(config_hash("solve --iters 20") == config_hash("solve --iters 20"));

    auto path = tmp("nlns_records.csv").string();
    write_run_records({r, r}, path);
    std::string text = slurp(path);
    CHECK(text.find(run_record_header()) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    std::filesystem::remove(path);
}
