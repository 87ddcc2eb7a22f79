#include "nlns/repair_policy.hpp"

namespace nlns {

Solution LearnedRepair::repair(const Instance& instance, DestroyedSolution destroyed,
                               Rng& rng) const {
    RepairState state(instance, std::move(destroyed));
    while (!state.complete()) {
        int ref = state.select_reference(rng);
        auto mask = state.action_mask();
        Vec probs = policy_forward(params_, state.feature_rows(), mask, ref);
        state.apply_action(sample_index(probs, rng));
    }
    return state.take_solution();
}

Solution RandomRepair::repair(const Instance& instance, DestroyedSolution destroyed,
                              Rng& rng) const {
    RepairState state(instance, std::move(destroyed));
    while (!state.complete()) {
        state.select_reference(rng);
        auto mask = state.action_mask();
        std::vector<int> allowed;
        for (size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) allowed.push_back(static_cast<int>(i));
        state.apply_action(allowed[rng.index(allowed.size())]);
    }
    return state.take_solution();
}

}  // namespace nlns
