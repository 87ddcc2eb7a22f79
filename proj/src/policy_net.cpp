#include "nlns/policy_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlns {

namespace {

void relu_inplace(Vec& v) {
    for (double& x : v)
        if (x < 0) x = 0;
}

// out = W x + b
void affine(const AffineLayer& l, const double* x, int xn, Vec& out) {
    out = l.b;
    matvec_block(l.w, 0, xn, x, out.data(), true);
}

void two_layer_forward(const TwoLayerNet& n, const double* x, int xn, Vec& pre1, Vec& hidden,
                       Vec& pre2, Vec& out) {
    affine(n.first, x, xn, pre1);
    hidden = pre1;
    relu_inplace(hidden);
    affine(n.second, hidden.data(), static_cast<int>(hidden.size()), pre2);
    out = pre2;
    if (n.rectify_output) relu_inplace(out);
}

// accumulates parameter gradients into g and, when dx is non-null, the
// gradient w.r.t. the net input into dx
void two_layer_backward(const TwoLayerNet& n, const double* x, int xn, const Vec& pre1,
                        const Vec& hidden, const Vec& pre2, Vec dout, TwoLayerNet& g,
                        double* dx) {
    const int d2 = static_cast<int>(dout.size());
    if (n.rectify_output)
        for (int k = 0; k < d2; ++k)
            if (pre2[k] <= 0) dout[k] = 0;
    for (int k = 0; k < d2; ++k) g.second.b[k] += dout[k];
    outer_block_add(g.second.w, 0, static_cast<int>(hidden.size()), dout.data(), hidden.data());
    Vec dh(hidden.size(), 0.0);
    tmatvec_block_add(n.second.w, 0, static_cast<int>(hidden.size()), dout.data(), dh.data());
    for (size_t k = 0; k < dh.size(); ++k)
        if (pre1[k] <= 0) dh[k] = 0;
    for (size_t k = 0; k < dh.size(); ++k) g.first.b[k] += dh[k];
    outer_block_add(g.first.w, 0, xn, dh.data(), x);
    if (dx) tmatvec_block_add(n.first.w, 0, xn, dh.data(), dx);
}

void init_affine(AffineLayer& l, Rng& rng) {
    double bound = 1.0 / std::sqrt(static_cast<double>(l.w.cols));
    for (double& v : l.w.a) v = rng.uniform(-bound, bound);
    std::fill(l.b.begin(), l.b.end(), 0.0);  // biases start at zero
}

void init_mat(Mat& m, Rng& rng) {
    double bound = 1.0 / std::sqrt(static_cast<double>(m.cols));
    for (double& v : m.a) v = rng.uniform(-bound, bound);
}

void init_vec(Vec& v, Rng& rng, int fan_in) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& x : v) x = rng.uniform(-bound, bound);
}

}  // namespace

PolicyParameters init_policy(int hidden, Rng& rng) {
    if (hidden < 1) throw std::invalid_argument("hidden width must be positive");
    PolicyParameters p;
    p.hidden = hidden;
    p.emb_input = {AffineLayer(hidden, 4), AffineLayer(hidden, hidden), false};
    p.emb_ref = {AffineLayer(hidden, 4), AffineLayer(hidden, hidden), false};
    p.align_w = Mat(hidden, 2 * hidden);
    p.align_v = Vec(hidden, 0.0);
    p.combine = {AffineLayer(hidden, 2 * hidden), AffineLayer(hidden, hidden), true};
    p.point_w = Mat(hidden, 2 * hidden);
    p.point_v = Vec(hidden, 0.0);

    init_affine(p.emb_input.first, rng);
    init_affine(p.emb_input.second, rng);
    init_affine(p.emb_ref.first, rng);
    init_affine(p.emb_ref.second, rng);
    init_mat(p.align_w, rng);
    init_vec(p.align_v, rng, hidden);
    init_affine(p.combine.first, rng);
    init_affine(p.combine.second, rng);
    init_mat(p.point_w, rng);
    init_vec(p.point_v, rng, hidden);
    return p;
}

PolicyParameters zeros_like(const PolicyParameters& p) {
    PolicyParameters z;
    z.hidden = p.hidden;
    int d = p.hidden;
    z.emb_input = {AffineLayer(d, 4), AffineLayer(d, d), false};
    z.emb_ref = {AffineLayer(d, 4), AffineLayer(d, d), false};
    z.align_w = Mat(d, 2 * d);
    z.align_v = Vec(d, 0.0);
    z.combine = {AffineLayer(d, 2 * d), AffineLayer(d, d), true};
    z.point_w = Mat(d, 2 * d);
    z.point_v = Vec(d, 0.0);
    return z;
}

std::vector<ParamView> param_views(PolicyParameters& p) {
    return {
        {"emb_input.w1", &p.emb_input.first.w.a},  {"emb_input.b1", &p.emb_input.first.b},
        {"emb_input.w2", &p.emb_input.second.w.a}, {"emb_input.b2", &p.emb_input.second.b},
        {"emb_ref.w1", &p.emb_ref.first.w.a},      {"emb_ref.b1", &p.emb_ref.first.b},
        {"emb_ref.w2", &p.emb_ref.second.w.a},     {"emb_ref.b2", &p.emb_ref.second.b},
        {"align.w", &p.align_w.a},                 {"align.v", &p.align_v},
        {"combine.w1", &p.combine.first.w.a},      {"combine.b1", &p.combine.first.b},
        {"combine.w2", &p.combine.second.w.a},     {"combine.b2", &p.combine.second.b},
        {"point.w", &p.point_w.a},                 {"point.v", &p.point_v},
    };
}

size_t param_count(const PolicyParameters& p) {
    size_t n = 0;
    for (const auto& v : param_views(const_cast<PolicyParameters&>(p))) n += v.data->size();
    return n;
}

Vec policy_forward(const PolicyParameters& p, const std::vector<FeatureRow>& features,
                   const std::vector<uint8_t>& mask, int ref, StepTrace* trace) {
    const int m = static_cast<int>(features.size());
    const int d = p.hidden;
    if (m < 2) throw std::invalid_argument("model input needs the depot and at least one tour end");
    if (static_cast<int>(mask.size()) != m) throw std::invalid_argument("mask size mismatch");
    if (ref < 1 || ref >= m) throw std::invalid_argument("reference index out of range");

    // per-input embeddings
    std::vector<Vec> in_pre(m), in_hidden(m), in_emb(m);
    for (int i = 0; i < m; ++i) {
        Vec pre2;
        two_layer_forward(p.emb_input, features[i].data(), 4, in_pre[i], in_hidden[i], pre2,
                          in_emb[i]);
    }
    Vec ref_pre, ref_hidden, ref_pre2, ref_emb;
    two_layer_forward(p.emb_ref, features[ref].data(), 4, ref_pre, ref_hidden, ref_pre2, ref_emb);

    // alignment over [h_i; h_ref]; the reference half enters each score the
    // same way, so it is applied once
    Vec align_right(d, 0.0);
    matvec_block(p.align_w, d, d, ref_emb.data(), align_right.data(), false);
    std::vector<Vec> align_tanh(m);
    Vec scores(m);
    for (int i = 0; i < m; ++i) {
        Vec t = align_right;
        matvec_block(p.align_w, 0, d, in_emb[i].data(), t.data(), true);
        for (double& v : t) v = std::tanh(v);
        scores[i] = dot(p.align_v.data(), t.data(), d);
        align_tanh[i] = std::move(t);
    }
    double smax = *std::max_element(scores.begin(), scores.end());
    Vec align_weights(m);
    double ssum = 0;
    for (int i = 0; i < m; ++i) {
        align_weights[i] = std::exp(scores[i] - smax);
        ssum += align_weights[i];
    }
    for (double& v : align_weights) v /= ssum;

    Vec context(d, 0.0);
    for (int i = 0; i < m; ++i) add_scaled(context, in_emb[i], align_weights[i]);

    // q = FFN([context; h_ref])
    Vec comb_in(2 * d);
    std::copy(context.begin(), context.end(), comb_in.begin());
    std::copy(ref_emb.begin(), ref_emb.end(), comb_in.begin() + d);
    Vec comb_pre1, comb_hidden, comb_pre2, comb_out;
    two_layer_forward(p.combine, comb_in.data(), 2 * d, comb_pre1, comb_hidden, comb_pre2,
                      comb_out);

    // pointer scores over [h_i; q], masked entries pinned to -inf
    Vec point_right(d, 0.0);
    matvec_block(p.point_w, d, d, comb_out.data(), point_right.data(), false);
    std::vector<Vec> point_tanh(m);
    Vec u(m, -std::numeric_limits<double>::infinity());
    bool any_allowed = false;
    for (int i = 0; i < m; ++i) {
        Vec t = point_right;
        matvec_block(p.point_w, 0, d, in_emb[i].data(), t.data(), true);
        for (double& v : t) v = std::tanh(v);
        if (mask[i]) {
            u[i] = dot(p.point_v.data(), t.data(), d);
            any_allowed = true;
        }
        point_tanh[i] = std::move(t);
    }
    if (!any_allowed) throw std::logic_error("all actions masked");

    double umax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
        if (mask[i]) umax = std::max(umax, u[i]);
    Vec probs(m, 0.0);
    double usum = 0;
    for (int i = 0; i < m; ++i) {
        if (!mask[i]) continue;
        probs[i] = std::exp(u[i] - umax);
        usum += probs[i];
    }
    for (int i = 0; i < m; ++i) probs[i] /= usum;

    if (trace) {
        trace->features = features;
        trace->mask = mask;
        trace->ref = ref;
        trace->in_pre = std::move(in_pre);
        trace->in_hidden = std::move(in_hidden);
        trace->in_emb = std::move(in_emb);
        trace->ref_pre = std::move(ref_pre);
        trace->ref_hidden = std::move(ref_hidden);
        trace->ref_emb = std::move(ref_emb);
        trace->align_tanh = std::move(align_tanh);
        trace->align_weights = std::move(align_weights);
        trace->context = std::move(context);
        trace->comb_pre1 = std::move(comb_pre1);
        trace->comb_hidden = std::move(comb_hidden);
        trace->comb_pre2 = std::move(comb_pre2);
        trace->comb_out = std::move(comb_out);
        trace->point_tanh = std::move(point_tanh);
        trace->probs = probs;
    }
    return probs;
}

void policy_backward(const PolicyParameters& p, const StepTrace& trace, double weight,
                     PolicyParameters& grad) {
    if (weight == 0.0) return;
    const int m = static_cast<int>(trace.features.size());
    const int d = p.hidden;

    // d(weight * log p[a]) / du_i = weight * (1[i==a] - p_i) on allowed entries
    Vec du(m, 0.0);
    for (int i = 0; i < m; ++i)
        if (trace.mask[i]) du[i] = weight * ((i == trace.action ? 1.0 : 0.0) - trace.probs[i]);

    std::vector<Vec> d_in_emb(m, Vec(d, 0.0));
    Vec d_ref_emb(d, 0.0);
    Vec d_comb_out(d, 0.0);

    for (int i = 0; i < m; ++i) {
        if (du[i] == 0.0) continue;
        const Vec& t = trace.point_tanh[i];
        add_scaled(grad.point_v, t, du[i]);
        Vec dt(d);
        for (int k = 0; k < d; ++k) dt[k] = du[i] * p.point_v[k] * (1.0 - t[k] * t[k]);
        outer_block_add(grad.point_w, 0, d, dt.data(), trace.in_emb[i].data());
        outer_block_add(grad.point_w, d, d, dt.data(), trace.comb_out.data());
        tmatvec_block_add(p.point_w, 0, d, dt.data(), d_in_emb[i].data());
        tmatvec_block_add(p.point_w, d, d, dt.data(), d_comb_out.data());
    }

    // back through the combiner FFN
    Vec comb_in(2 * d);
    std::copy(trace.context.begin(), trace.context.end(), comb_in.begin());
    std::copy(trace.ref_emb.begin(), trace.ref_emb.end(), comb_in.begin() + d);
    Vec d_comb_in(2 * d, 0.0);
    two_layer_backward(p.combine, comb_in.data(), 2 * d, trace.comb_pre1, trace.comb_hidden,
                       trace.comb_pre2, d_comb_out, grad.combine, d_comb_in.data());
    Vec d_context(d_comb_in.begin(), d_comb_in.begin() + d);
    for (int k = 0; k < d; ++k) d_ref_emb[k] += d_comb_in[d + k];

    // context = sum_i a_i h_i
    Vec d_align(m, 0.0);
    for (int i = 0; i < m; ++i) {
        d_align[i] = dot(d_context.data(), trace.in_emb[i].data(), d);
        add_scaled(d_in_emb[i], d_context, trace.align_weights[i]);
    }
    // softmax backward (no mask on the alignment)
    double mixed = 0;
    for (int i = 0; i < m; ++i) mixed += trace.align_weights[i] * d_align[i];
    for (int i = 0; i < m; ++i) {
        double ds = trace.align_weights[i] * (d_align[i] - mixed);
        if (ds == 0.0) continue;
        const Vec& t = trace.align_tanh[i];
        add_scaled(grad.align_v, t, ds);
        Vec dt(d);
        for (int k = 0; k < d; ++k) dt[k] = ds * p.align_v[k] * (1.0 - t[k] * t[k]);
        outer_block_add(grad.align_w, 0, d, dt.data(), trace.in_emb[i].data());
        outer_block_add(grad.align_w, d, d, dt.data(), trace.ref_emb.data());
        tmatvec_block_add(p.align_w, 0, d, dt.data(), d_in_emb[i].data());
        tmatvec_block_add(p.align_w, d, d, dt.data(), d_ref_emb.data());
    }

    // reference embedding; pre2 equals the output for the linear-top nets
    two_layer_backward(p.emb_ref, trace.features[trace.ref].data(), 4, trace.ref_pre,
                       trace.ref_hidden, trace.ref_emb, d_ref_emb, grad.emb_ref, nullptr);

    for (int i = 0; i < m; ++i) {
        bool zero = true;
        for (double v : d_in_emb[i])
            if (v != 0.0) {
                zero = false;
                break;
            }
        if (zero) continue;
        two_layer_backward(p.emb_input, trace.features[i].data(), 4, trace.in_pre[i],
                           trace.in_hidden[i], trace.in_emb[i], d_in_emb[i], grad.emb_input,
                           nullptr);
    }
}

int sample_index(const Vec& probs, Rng& rng) {
    double r = rng.uniform();
    double acc = 0;
    int last = -1;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0) continue;
        acc += probs[i];
        last = static_cast<int>(i);
        if (r < acc) return last;
    }
    return last;  // guards against accumulated rounding at r ~ 1
}

int greedy_index(const Vec& probs) {
    int best = 0;
    for (size_t i = 1; i < probs.size(); ++i)
        if (probs[i] > probs[best]) best = static_cast<int>(i);
    return best;
}

}  // namespace nlns
