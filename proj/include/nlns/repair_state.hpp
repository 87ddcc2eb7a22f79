#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nlns/destroy.hpp"
#include "nlns/instance.hpp"
#include "nlns/rng.hpp"
#include "nlns/solution.hpp"

namespace nlns {

// One row of the model input X_t. Raw values are kept here; feature_rows()
// applies the normalization the nets see.
struct ModelInput {
    double x = 0;
    double y = 0;
    int fulfilled = 0;   // fragment's delivered quantity; -1 for the depot
    int state = 0;       // 0 depot, 1 lone customer, 2 open end, 3 open end of a depot fragment
    int fragment = -1;   // owning fragment id; -1 for the depot input
    bool at_back = false;  // which end of the fragment this row represents
};

using FeatureRow = std::array<double, 4>;

// The sequential repair environment: fragments of a destroyed solution, the
// derived model inputs, the reference input and the action mask. Actions
// connect the reference end to another input until no fragment remains.
// Single-owner mutable; distinct states may be advanced concurrently.
class RepairState {
public:
    RepairState(const Instance& instance, DestroyedSolution destroyed);

    const Instance& instance() const { return *instance_; }
    bool complete() const { return fragments_.empty(); }
    int step() const { return step_; }

    // inputs, depot always at index 0, then fragment ends in fragment-id order
    const std::vector<ModelInput>& inputs() const { return inputs_; }

    // normalized features: coordinates scaled into the unit square, demand
    // divided by capacity, depot demand fixed at -1
    std::vector<FeatureRow> feature_rows() const;

    int reference() const { return reference_; }

    // Picks f_t: the surviving end of the last connected fragment if that
    // fragment is still open, otherwise uniformly among non-depot inputs.
    int select_reference(Rng& rng);

    // allowed actions for the current reference (1 = allowed); depot is
    // always allowed, so the mask is never empty
    std::vector<uint8_t> action_mask() const;

    // Connects the reference end to inputs()[target]. Target must be
    // unmasked; anything else is a caller bug and throws.
    void apply_action(int target);

    int open_end_count() const;

    // total quantity currently carried by fragments (conservation checks)
    long fragment_quantity() const;

    std::vector<Fragment> fragments() const {
        std::vector<Fragment> out;
        for (const auto& sf : fragments_) out.push_back(sf.frag);
        return out;
    }

    // After complete(): assembles the final solution and computes its cost.
    Solution take_solution();

private:
    struct StoredFragment {
        int id;
        Fragment frag;
    };

    void rebuild_inputs();
    int find_fragment(int id) const;
    int input_for_end(int fragment_id, bool at_back) const;

    const Instance* instance_;
    std::vector<Tour> tours_;                 // finished tours, grows during repair
    std::vector<StoredFragment> fragments_;   // live fragments in id order
    std::vector<ModelInput> inputs_;
    int reference_ = -1;
    int step_ = 0;
    int next_id_ = 0;
    int pending_fragment_ = -1;  // continuation hint for select_reference
    bool pending_at_back_ = false;
};

// Strict entry point for turning a destroyed solution into model inputs;
// rejects inputs with nothing to repair.
inline RepairState encode_inputs(const Instance& instance, DestroyedSolution destroyed) {
    if (destroyed.fragments.empty())
        throw std::invalid_argument("destroyed solution has no fragments to repair");
    return RepairState(instance, std::move(destroyed));
}

}  // namespace nlns
