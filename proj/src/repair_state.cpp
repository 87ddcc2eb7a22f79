#include "nlns/repair_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace nlns {

RepairState::RepairState(const Instance& instance, DestroyedSolution destroyed)
    : instance_(&instance), tours_(std::move(destroyed.complete_tours)) {
    fragments_.reserve(destroyed.fragments.size());
    for (auto& f : destroyed.fragments) fragments_.push_back({next_id_++, std::move(f)});
    rebuild_inputs();
}

void RepairState::rebuild_inputs() {
    inputs_.clear();
    ModelInput depot;
    depot.x = instance_->position(0).x;
    depot.y = instance_->position(0).y;
    depot.fulfilled = -1;
    depot.state = 0;
    inputs_.push_back(depot);

    auto push_end = [&](const StoredFragment& sf, bool at_back, int state) {
        const Fragment& f = sf.frag;
        int node = at_back ? f.visits.back().node : f.visits.front().node;
        ModelInput in;
        in.x = instance_->position(node).x;
        in.y = instance_->position(node).y;
        in.fulfilled = f.fulfilled();
        in.state = state;
        in.fragment = sf.id;
        in.at_back = at_back;
        inputs_.push_back(in);
    };

    for (const auto& sf : fragments_) {
        const Fragment& f = sf.frag;
        if (f.singleton()) {
            push_end(sf, false, 1);
        } else if (f.depot == DepotEnd::Front) {
            push_end(sf, true, 3);
        } else if (f.depot == DepotEnd::Back) {
            push_end(sf, false, 3);
        } else {
            push_end(sf, false, 2);
            push_end(sf, true, 2);
        }
    }
    reference_ = -1;
}

std::vector<FeatureRow> RepairState::feature_rows() const {
    const FeatureScaler& s = instance_->scaler();
    double q = instance_->capacity();
    std::vector<FeatureRow> rows;
    rows.reserve(inputs_.size());
    for (const auto& in : inputs_) {
        double demand = in.fulfilled < 0 ? -1.0 : in.fulfilled / q;
        rows.push_back({s.sx(in.x), s.sy(in.y), demand, static_cast<double>(in.state)});
    }
    return rows;
}

int RepairState::find_fragment(int id) const {
    for (size_t i = 0; i < fragments_.size(); ++i)
        if (fragments_[i].id == id) return static_cast<int>(i);
    return -1;
}

int RepairState::input_for_end(int fragment_id, bool at_back) const {
    int loose = -1;
    for (size_t i = 1; i < inputs_.size(); ++i) {
        if (inputs_[i].fragment != fragment_id) continue;
        if (inputs_[i].at_back == at_back) return static_cast<int>(i);
        loose = static_cast<int>(i);
    }
    return loose;  // lone-customer fragments have a single two-sided end
}

int RepairState::select_reference(Rng& rng) {
    if (inputs_.size() < 2) throw std::logic_error("no open tour end to repair");
    if (pending_fragment_ >= 0) {
        int idx = input_for_end(pending_fragment_, pending_at_back_);
        pending_fragment_ = -1;
        if (idx > 0) {
            reference_ = idx;
            return reference_;
        }
    }
    reference_ = 1 + static_cast<int>(rng.index(inputs_.size() - 1));
    return reference_;
}

std::vector<uint8_t> RepairState::action_mask() const {
    if (reference_ < 1) throw std::logic_error("reference input not selected");
    std::vector<uint8_t> mask(inputs_.size(), 0);
    mask[0] = 1;  // returning to the depot is always feasible

    const ModelInput& ref = inputs_[reference_];
    const Fragment& own = fragments_[find_fragment(ref.fragment)].frag;
    const int capacity = instance_->capacity();
    const bool sdvrp = instance_->variant() == Variant::SDVRP;

    for (size_t j = 1; j < inputs_.size(); ++j) {
        if (static_cast<int>(j) == reference_) continue;       // no self-connection
        if (inputs_[j].fragment == ref.fragment) continue;     // would close a depot-less cycle
        const Fragment& other = fragments_[find_fragment(inputs_[j].fragment)].frag;
        int combined = own.fulfilled() + other.fulfilled();
        if (combined <= capacity)
            mask[j] = 1;
        else if (sdvrp && other.singleton() && own.fulfilled() < capacity)
            mask[j] = 1;  // split delivery absorbs what still fits
    }
    return mask;
}

int RepairState::open_end_count() const {
    int n = 0;
    for (const auto& sf : fragments_) n += sf.frag.open_ends();
    return n;
}

long RepairState::fragment_quantity() const {
    long q = 0;
    for (const auto& sf : fragments_) q += sf.frag.fulfilled();
    return q;
}

namespace {

void reverse_fragment(Fragment& f) {
    std::reverse(f.visits.begin(), f.visits.end());
    if (f.depot == DepotEnd::Front)
        f.depot = DepotEnd::Back;
    else if (f.depot == DepotEnd::Back)
        f.depot = DepotEnd::Front;
}

// append source's visits to dst, fusing a shared junction customer
void append_visits(Fragment& dst, const Fragment& src) {
    size_t start = 0;
    if (dst.visits.back().node == src.visits.front().node) {
        dst.visits.back().quantity += src.visits.front().quantity;
        start = 1;
    }
    dst.visits.insert(dst.visits.end(), src.visits.begin() + start, src.visits.end());
}

}  // namespace

void RepairState::apply_action(int target) {
    if (target < 0 || target >= static_cast<int>(inputs_.size()))
        throw std::logic_error("action target out of range");
    if (!action_mask()[target]) throw std::logic_error("action target is masked");

    const ModelInput ref = inputs_[reference_];
    int f_idx = find_fragment(ref.fragment);
    Fragment merged = std::move(fragments_[f_idx].frag);
    if (!ref.at_back) reverse_fragment(merged);  // reference end now at the back
    fragments_.erase(fragments_.begin() + f_idx);

    pending_fragment_ = -1;
    if (target == 0) {
        if (merged.depot == DepotEnd::Front) {
            tours_.push_back(Tour{std::move(merged.visits)});
        } else {
            merged.depot = DepotEnd::Back;
            fragments_.push_back({next_id_++, std::move(merged)});
        }
    } else {
        const ModelInput tgt = inputs_[target];
        int g_idx = find_fragment(tgt.fragment);
        Fragment other = std::move(fragments_[g_idx].frag);
        fragments_.erase(fragments_.begin() + g_idx);

        int combined = merged.fulfilled() + other.fulfilled();
        if (combined > instance_->capacity()) {
            // split delivery: serve what still fits, close this tour at the
            // depot, and leave the remainder as a fresh lone customer
            int fits = instance_->capacity() - merged.fulfilled();
            Visit remainder{other.visits.front().node, other.visits.front().quantity - fits};
            if (merged.visits.back().node == remainder.node)
                merged.visits.back().quantity += fits;
            else
                merged.visits.push_back({remainder.node, fits});
            if (merged.depot == DepotEnd::Front)
                tours_.push_back(Tour{std::move(merged.visits)});
            else {
                merged.depot = DepotEnd::Back;
                fragments_.push_back({next_id_++, std::move(merged)});
            }
            fragments_.push_back({next_id_++, Fragment{{remainder}, DepotEnd::None}});
        } else {
            if (tgt.at_back) reverse_fragment(other);  // target end now at the front
            append_visits(merged, other);
            bool open_back = other.depot != DepotEnd::Back;
            if (merged.depot == DepotEnd::Front && !open_back) {
                tours_.push_back(Tour{std::move(merged.visits)});
            } else {
                if (!open_back) merged.depot = DepotEnd::Back;
                int id = next_id_++;
                fragments_.push_back({id, std::move(merged)});
                if (open_back) {
                    pending_fragment_ = id;  // keep extending the tour we just grew
                    pending_at_back_ = true;
                }
            }
        }
    }
    ++step_;
    rebuild_inputs();
}

Solution RepairState::take_solution() {
    if (!complete()) throw std::logic_error("repair not finished");
    Solution solution;
    solution.tours = std::move(tours_);
    solution.cost = solution_cost(*instance_, solution);
    return solution;
}

}  // namespace nlns
