#pragma once

#include <memory>
#include <string>

#include "nlns/policy_net.hpp"
#include "nlns/repair_state.hpp"

namespace nlns {

// A repair policy turns a destroyed solution back into a feasible one.
// Implementations must be safe to call concurrently with distinct rngs.
class RepairOperator {
public:
    virtual ~RepairOperator() = default;
    virtual std::string name() const = 0;
    virtual Solution repair(const Instance& instance, DestroyedSolution destroyed, Rng& rng) const = 0;
};

// Samples actions from a trained attention model.
class LearnedRepair : public RepairOperator {
public:
    explicit LearnedRepair(PolicyParameters params, std::string name = "learned")
        : params_(std::move(params)), name_(std::move(name)) {}

    std::string name() const override { return name_; }
    Solution repair(const Instance& instance, DestroyedSolution destroyed, Rng& rng) const override;

    const PolicyParameters& params() const { return params_; }

private:
    PolicyParameters params_;
    std::string name_;
};

// Picks uniformly among the unmasked actions; the ablation floor.
class RandomRepair : public RepairOperator {
public:
    std::string name() const override { return "random"; }
    Solution repair(const Instance& instance, DestroyedSolution destroyed, Rng& rng) const override;
};

}  // namespace nlns
