#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nlns/rng.hpp"
#include "nlns/tensor.hpp"

namespace nlns {

using FeatureRow = std::array<double, 4>;

struct AffineLayer {
    Mat w;
    Vec b;

    AffineLayer() = default;
    AffineLayer(int out, int in) : w(out, in), b(out, 0.0) {}
};

// two affine layers with a rectifier in between; `rectify_output` adds one
// after the second layer as well
struct TwoLayerNet {
    AffineLayer first;
    AffineLayer second;
    bool rectify_output = false;
};

// All trainable weights of the repair model. The layout follows the model's
// forward pass: shared per-input embedding, reference embedding, attention
// over [h_i; h_ref], a feed-forward combiner and the pointer scorer.
struct PolicyParameters {
    int hidden = 128;
    TwoLayerNet emb_input;  // 4 -> dh -> dh
    TwoLayerNet emb_ref;    // 4 -> dh -> dh, separate weights
    Mat align_w;            // dh x 2dh
    Vec align_v;            // dh
    TwoLayerNet combine;    // 2dh -> dh -> dh, both rectified
    Mat point_w;            // dh x 2dh
    Vec point_v;            // dh
};

PolicyParameters init_policy(int hidden, Rng& rng);

// zero-valued clone with the same shapes, used as a gradient accumulator
PolicyParameters zeros_like(const PolicyParameters& p);

size_t param_count(const PolicyParameters& p);

// named handles over every parameter tensor, in a fixed order shared by the
// optimizer, the serializer and the gradient checks
struct ParamView {
    const char* name;
    Vec* data;
};
std::vector<ParamView> param_views(PolicyParameters& p);

// Everything the backward pass needs about one repair step: the inputs the
// model saw, the mask, the cached activations and the chosen action.
struct StepTrace {
    std::vector<FeatureRow> features;
    std::vector<uint8_t> mask;
    int ref = -1;
    int action = -1;
    double log_prob = 0;

    // forward activations (per input where applicable)
    std::vector<Vec> in_pre, in_hidden, in_emb;
    Vec ref_pre, ref_hidden, ref_emb;
    std::vector<Vec> align_tanh;
    Vec align_weights;
    Vec context;
    Vec comb_pre1, comb_hidden, comb_pre2, comb_out;
    std::vector<Vec> point_tanh;
    Vec probs;
};

// Action distribution over the inputs (Eqs. of the attention model): masked
// entries come out exactly 0 and the rest sums to 1. Pass a trace to keep
// the activations for a later backward call.
Vec policy_forward(const PolicyParameters& p, const std::vector<FeatureRow>& features,
                   const std::vector<uint8_t>& mask, int ref, StepTrace* trace = nullptr);

// Accumulates d(weight * log p[action]) / dθ into grad. The trace must come
// from policy_forward with the same parameter values.
void policy_backward(const PolicyParameters& p, const StepTrace& trace, double weight,
                     PolicyParameters& grad);

int sample_index(const Vec& probs, Rng& rng);
int greedy_index(const Vec& probs);

}  // namespace nlns
