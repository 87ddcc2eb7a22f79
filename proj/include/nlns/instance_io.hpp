#pragma once

#include <optional>
#include <string>

#include "nlns/instance.hpp"
#include "nlns/solution.hpp"

namespace nlns {

// Reads an instance file. Two formats are supported and detected from the
// content: the routing-library text format (NAME/DIMENSION/CAPACITY/
// NODE_COORD_SECTION/DEMAND_SECTION/DEPOT_SECTION) and the native JSON
// format, which additionally carries variant and rounding mode. Malformed
// input raises std::runtime_error naming the offending line.
Instance parse_instance(const std::string& path);

// native JSON (lossless round trip)
void write_instance(const Instance& instance, const std::string& path);

// routing-library text format; variant and rounding are not representable
void write_instance_tsplib(const Instance& instance, const std::string& path);

// rebuilds an instance with different modes (file formats that cannot carry
// them get them from the command line)
Instance with_modes(const Instance& instance, std::optional<Variant> variant,
                    std::optional<CostRounding> rounding);

// Solution files: tour lists with per-visit deliveries, total cost and the
// modes the cost was computed under.
void write_solution(const Instance& instance, const Solution& solution, const std::string& path);
Solution read_solution(const std::string& path);

}  // namespace nlns
