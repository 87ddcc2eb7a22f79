#include "nlns/instance_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace nlns {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// %.17g keeps doubles byte-stable through a round trip
std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Instance parse_native(const std::string& path, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    try {
        if (j.value("format", "") != "nlns-instance")
            throw std::runtime_error("not an nlns-instance file");
        Variant variant = j.value("variant", "CVRP") == "SDVRP" ? Variant::SDVRP : Variant::CVRP;
        CostRounding rounding = j.value("rounding", "exact") == "nearest-integer"
                                    ? CostRounding::NearestInteger
                                    : CostRounding::Exact;
        int capacity = j.at("capacity").get<int>();
        std::vector<Point> nodes;
        std::vector<int> demands;
        for (const auto& row : j.at("nodes")) {
            nodes.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
            demands.push_back(row.at(2).get<int>());
        }
        return Instance(std::move(nodes), std::move(demands), capacity, variant, rounding,
                        j.value("name", ""));
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

Instance parse_tsplib(const std::string& path, std::istream& in) {
    std::string name;
    int dimension = -1;
    int capacity = -1;
    std::vector<Point> nodes;
    std::vector<bool> have_coord;
    std::vector<int> demands;
    std::vector<bool> have_demand;
    int depot_index = -1;

    enum class Section { None, Coords, Demands, Depot };
    Section section = Section::None;

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line == "EOF") break;

        auto colon = line.find(':');
        std::string keyword = trim(colon == std::string::npos ? line : line.substr(0, colon));

        if (keyword == "NODE_COORD_SECTION") {
            if (dimension <= 0) fail(path, lineno, "NODE_COORD_SECTION before DIMENSION");
            section = Section::Coords;
            nodes.assign(dimension, {});
            have_coord.assign(dimension, false);
            continue;
        }
        if (keyword == "DEMAND_SECTION") {
            if (dimension <= 0) fail(path, lineno, "DEMAND_SECTION before DIMENSION");
            section = Section::Demands;
            demands.assign(dimension, 0);
            have_demand.assign(dimension, false);
            continue;
        }
        if (keyword == "DEPOT_SECTION") {
            section = Section::Depot;
            continue;
        }
        if (colon != std::string::npos) {
            std::string value = trim(line.substr(colon + 1));
            section = Section::None;
            if (keyword == "NAME") {
                name = value;
            } else if (keyword == "DIMENSION") {
                dimension = std::stoi(value);
                if (dimension < 2) fail(path, lineno, "DIMENSION must be at least 2");
            } else if (keyword == "CAPACITY") {
                capacity = std::stoi(value);
            } else if (keyword == "EDGE_WEIGHT_TYPE") {
                if (value != "EUC_2D") fail(path, lineno, "unsupported EDGE_WEIGHT_TYPE " + value);
            } else if (keyword == "TYPE" || keyword == "COMMENT") {
                // accepted and ignored
            } else {
                fail(path, lineno, "unknown keyword " + keyword);
            }
            continue;
        }

        std::istringstream fields(line);
        if (section == Section::Coords) {
            int id;
            double x, y;
            if (!(fields >> id >> x >> y)) fail(path, lineno, "expected: <id> <x> <y>");
            if (id < 1 || id > dimension) fail(path, lineno, "node id out of range");
            nodes[id - 1] = {x, y};
            have_coord[id - 1] = true;
        } else if (section == Section::Demands) {
            int id, d;
            if (!(fields >> id >> d)) fail(path, lineno, "expected: <id> <demand>");
            if (id < 1 || id > dimension) fail(path, lineno, "demand for unknown node " + std::to_string(id));
            demands[id - 1] = d;
            have_demand[id - 1] = true;
        } else if (section == Section::Depot) {
            int id;
            if (!(fields >> id)) fail(path, lineno, "expected a depot id or -1");
            if (id == -1) {
                section = Section::None;
            } else if (depot_index == -1) {
                depot_index = id;
            } else {
                fail(path, lineno, "multiple depots are not supported");
            }
        } else {
            fail(path, lineno, "data outside of any section");
        }
    }

    int lastline = lineno == 0 ? 1 : lineno;
    if (dimension <= 0) fail(path, lastline, "missing DIMENSION");
    if (capacity <= 0) fail(path, lastline, "missing CAPACITY");
    if (nodes.empty()) fail(path, lastline, "missing NODE_COORD_SECTION");
    if (demands.empty()) fail(path, lastline, "missing DEMAND_SECTION");
    for (int i = 0; i < dimension; ++i) {
        if (!have_coord[i]) fail(path, lastline, "no coordinates for node " + std::to_string(i + 1));
        if (!have_demand[i]) fail(path, lastline, "no demand for node " + std::to_string(i + 1));
    }
    if (depot_index != 1 && depot_index != -1)
        fail(path, lastline, "depot must be node 1");

    // instances in this format follow the rounded-cost convention
    return Instance(std::move(nodes), std::move(demands), capacity, Variant::CVRP,
                    CostRounding::NearestInteger, name);
}

}  // namespace

Instance parse_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_native(path, text);
    std::istringstream stream(text);
    return parse_tsplib(path, stream);
}

void write_instance(const Instance& instance, const std::string& path) {
    json j;
    j["format"] = "nlns-instance";
    j["version"] = 1;
    j["name"] = instance.name();
    j["variant"] = to_string(instance.variant());
    j["rounding"] = to_string(instance.rounding());
    j["capacity"] = instance.capacity();
    json nodes = json::array();
    for (int i = 0; i < instance.num_nodes(); ++i)
        nodes.push_back({instance.position(i).x, instance.position(i).y, instance.demand(i)});
    j["nodes"] = std::move(nodes);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_instance_tsplib(const Instance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "NAME : " << (instance.name().empty() ? "nlns" : instance.name()) << "\n";
    out << "TYPE : CVRP\n";
    out << "DIMENSION : " << instance.num_nodes() << "\n";
    out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out << "CAPACITY : " << instance.capacity() << "\n";
    out << "NODE_COORD_SECTION\n";
    for (int i = 0; i < instance.num_nodes(); ++i)
        out << (i + 1) << " " << format_double(instance.position(i).x) << " "
            << format_double(instance.position(i).y) << "\n";
    out << "DEMAND_SECTION\n";
    for (int i = 0; i < instance.num_nodes(); ++i) out << (i + 1) << " " << instance.demand(i) << "\n";
    out << "DEPOT_SECTION\n1\n-1\nEOF\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

Instance with_modes(const Instance& instance, std::optional<Variant> variant,
                    std::optional<CostRounding> rounding) {
    std::vector<Point> nodes;
    std::vector<int> demands;
    for (int i = 0; i < instance.num_nodes(); ++i) {
        nodes.push_back(instance.position(i));
        demands.push_back(instance.demand(i));
    }
    return Instance(std::move(nodes), std::move(demands), instance.capacity(),
                    variant.value_or(instance.variant()), rounding.value_or(instance.rounding()),
                    instance.name());
}

void write_solution(const Instance& instance, const Solution& solution, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "# nlns solution\n";
    out << "instance " << (instance.name().empty() ? "-" : instance.name()) << "\n";
    out << "variant " << to_string(instance.variant()) << "\n";
    out << "rounding " << to_string(instance.rounding()) << "\n";
    out << "cost " << format_double(solution.cost) << "\n";
    out << "tours " << solution.tours.size() << "\n";
    for (const auto& tour : solution.tours) {
        out << "tour 0";
        for (const auto& v : tour.visits) out << " " << v.node;
        out << " 0\n";
        out << "deliveries";
        for (const auto& v : tour.visits) out << " " << v.quantity;
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Solution read_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Solution solution;
    std::string raw;
    int lineno = 0;
    Tour* open_tour = nullptr;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string key;
        fields >> key;
        if (key == "cost") {
            fields >> solution.cost;
        } else if (key == "tour") {
            std::vector<int> ids;
            int id;
            while (fields >> id) ids.push_back(id);
            if (ids.size() < 2 || ids.front() != 0 || ids.back() != 0)
                fail(path, lineno, "tour must start and end at the depot (0)");
            Tour tour;
            for (size_t i = 1; i + 1 < ids.size(); ++i) tour.visits.push_back({ids[i], 0});
            solution.tours.push_back(std::move(tour));
            open_tour = &solution.tours.back();
        } else if (key == "deliveries") {
            if (!open_tour) fail(path, lineno, "deliveries before any tour");
            for (auto& v : open_tour->visits)
                if (!(fields >> v.quantity)) fail(path, lineno, "not enough delivery quantities");
            open_tour = nullptr;
        } else if (key == "instance" || key == "variant" || key == "rounding" || key == "tours") {
            // header lines; values are informational here
        } else {
            fail(path, lineno, "unknown line: " + key);
        }
    }
    return solution;
}

}  // namespace nlns
