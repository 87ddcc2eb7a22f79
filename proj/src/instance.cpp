#include "nlns/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace nlns {

namespace {

FeatureScaler fit_scaler(const std::vector<Point>& nodes) {
    double min_x = nodes[0].x, max_x = nodes[0].x;
    double min_y = nodes[0].y, max_y = nodes[0].y;
    for (const auto& p : nodes) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    // Coordinates already inside the unit square are used as-is, so generated
    // instances keep their raw features.
    if (min_x >= 0.0 && max_x <= 1.0 && min_y >= 0.0 && max_y <= 1.0) return {};
    double range = std::max(max_x - min_x, max_y - min_y);
    FeatureScaler s;
    s.off_x = min_x;
    s.off_y = min_y;
    s.scale = range > 0.0 ? 1.0 / range : 1.0;
    return s;
}

}  // namespace

Instance::Instance(std::vector<Point> nodes, std::vector<int> demands, int capacity,
                   Variant variant, CostRounding rounding, std::string name)
    : nodes_(std::move(nodes)),
      demands_(std::move(demands)),
      capacity_(capacity),
      variant_(variant),
      rounding_(rounding),
      name_(std::move(name)) {
    if (nodes_.size() < 2) throw std::invalid_argument("instance needs a depot and at least one customer");
    if (demands_.size() != nodes_.size())
        throw std::invalid_argument("demand list does not match node list");
    if (capacity_ < 1) throw std::invalid_argument("vehicle capacity must be positive");
    if (demands_[0] != 0) throw std::invalid_argument("depot demand must be 0");
    for (size_t i = 1; i < demands_.size(); ++i) {
        if (demands_[i] < 1)
            throw std::invalid_argument("customer " + std::to_string(i) + " has demand < 1");
        if (demands_[i] > capacity_)
            throw std::invalid_argument("customer " + std::to_string(i) +
                                        " demand exceeds vehicle capacity");
    }
    scaler_ = fit_scaler(nodes_);
}

}  // namespace nlns
