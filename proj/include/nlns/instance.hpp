#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace nlns {

enum class CostRounding { Exact, NearestInteger };
enum class Variant { CVRP, SDVRP };

struct Point {
    double x = 0;
    double y = 0;
};

// Maps raw node coordinates into the unit square for the model features.
// A single scale factor for both axes keeps the geometry intact.
struct FeatureScaler {
    double off_x = 0;
    double off_y = 0;
    double scale = 1.0;

    double sx(double x) const { return (x - off_x) * scale; }
    double sy(double y) const { return (y - off_y) * scale; }
};

// A CVRP/SDVRP instance. Node 0 is the depot; nodes 1..n are customers.
// Immutable after construction and safe to share across threads.
class Instance {
public:
    Instance(std::vector<Point> nodes, std::vector<int> demands, int capacity,
             Variant variant = Variant::CVRP, CostRounding rounding = CostRounding::Exact,
             std::string name = "");

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_customers() const { return num_nodes() - 1; }
    const Point& position(int node) const { return nodes_[node]; }
    int demand(int node) const { return demands_[node]; }
    int capacity() const { return capacity_; }
    Variant variant() const { return variant_; }
    CostRounding rounding() const { return rounding_; }
    const std::string& name() const { return name_; }
    const FeatureScaler& scaler() const { return scaler_; }

    // Euclidean travel cost between nodes, rounded per the rounding mode.
    double travel_cost(int i, int j) const {
        double dx = nodes_[i].x - nodes_[j].x;
        double dy = nodes_[i].y - nodes_[j].y;
        double d = std::sqrt(dx * dx + dy * dy);
        return rounding_ == CostRounding::NearestInteger ? std::round(d) : d;
    }

private:
    std::vector<Point> nodes_;
    std::vector<int> demands_;
    int capacity_;
    Variant variant_;
    CostRounding rounding_;
    std::string name_;
    FeatureScaler scaler_;
};

inline const char* to_string(Variant v) { return v == Variant::CVRP ? "CVRP" : "SDVRP"; }
inline const char* to_string(CostRounding r) {
    return r == CostRounding::Exact ? "exact" : "nearest-integer";
}

}  // namespace nlns
