#pragma once

#include "nlns/repair_policy.hpp"

namespace nlns {

// Configuration of the handcrafted sequential-insertion repair.
struct InsertionConfig {
    double greediness = 0.9;  // probability of taking a position during the rank scan
};

// Non-learned repair: closes every non-singleton fragment into a tour, pools
// the removed customers, sorts the pool by one randomly chosen criterion
// (demand desc, depot distance desc, or shuffled) and reinserts sequentially.
// Candidate positions are scanned in increasing insertion cost and accepted
// with probability `greediness`; opening a fresh tour is always an option.
Solution handcrafted_repair(const Instance& instance, DestroyedSolution destroyed,
                            const InsertionConfig& config, Rng& rng);

class HandcraftedRepair : public RepairOperator {
public:
    explicit HandcraftedRepair(InsertionConfig config = {}) : config_(config) {}

    std::string name() const override { return "handcrafted"; }
    Solution repair(const Instance& instance, DestroyedSolution destroyed, Rng& rng) const override {
        return handcrafted_repair(instance, std::move(destroyed), config_, rng);
    }

private:
    InsertionConfig config_;
};

Solution random_repair(const Instance& instance, DestroyedSolution destroyed, Rng& rng);

}  // namespace nlns
