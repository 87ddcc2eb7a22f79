#pragma once

#include <vector>

#include "nlns/policy_net.hpp"

namespace nlns {

// The baseline model: a position-wise feed-forward net (4 -> dh -> dh -> 1,
// rectified hidden layers) applied to every input of X_0; the repair-cost
// estimate is the sum of the per-input outputs, so it is permutation
// invariant by construction.
struct CriticParameters {
    int hidden = 128;
    AffineLayer l1;  // dh x 4
    AffineLayer l2;  // dh x dh
    Vec head_w;      // dh
    Vec head_b = Vec(1, 0.0);
};

CriticParameters init_critic(int hidden, Rng& rng);
CriticParameters zeros_like(const CriticParameters& c);
std::vector<ParamView> param_views(CriticParameters& c);

struct CriticTrace {
    std::vector<FeatureRow> features;
    std::vector<Vec> pre1, hidden1, pre2, hidden2;
    double output = 0;
};

double critic_forward(const CriticParameters& c, const std::vector<FeatureRow>& features,
                      CriticTrace* trace = nullptr);

// Accumulates d(weight * output) / dθ into grad; for an MSE loss pass
// weight = 2 * (output - target) / batch.
void critic_backward(const CriticParameters& c, const CriticTrace& trace, double weight,
                     CriticParameters& grad);

}  // namespace nlns
