#include "nlns/critic.hpp"

#include <cmath>
#include <stdexcept>

namespace nlns {

CriticParameters init_critic(int hidden, Rng& rng) {
    if (hidden < 1) throw std::invalid_argument("hidden width must be positive");
    CriticParameters c;
    c.hidden = hidden;
    c.l1 = AffineLayer(hidden, 4);
    c.l2 = AffineLayer(hidden, hidden);
    c.head_w = Vec(hidden, 0.0);

    auto fill = [&](Vec& v, int fan_in) {
        double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& x : v) x = rng.uniform(-bound, bound);
    };
    fill(c.l1.w.a, 4);
    fill(c.l2.w.a, hidden);
    fill(c.head_w, hidden);
    return c;
}

CriticParameters zeros_like(const CriticParameters& c) {
    CriticParameters z;
    z.hidden = c.hidden;
    z.l1 = AffineLayer(c.hidden, 4);
    z.l2 = AffineLayer(c.hidden, c.hidden);
    z.head_w = Vec(c.hidden, 0.0);
    return z;
}

std::vector<ParamView> param_views(CriticParameters& c) {
    return {
        {"critic.w1", &c.l1.w.a}, {"critic.b1", &c.l1.b},     {"critic.w2", &c.l2.w.a},
        {"critic.b2", &c.l2.b},   {"critic.head_w", &c.head_w}, {"critic.head_b", &c.head_b},
    };
}

double critic_forward(const CriticParameters& c, const std::vector<FeatureRow>& features,
                      CriticTrace* trace) {
    if (features.empty()) throw std::invalid_argument("critic needs at least one input");
    const int m = static_cast<int>(features.size());
    const int d = c.hidden;
    double total = m * c.head_b[0];

    std::vector<Vec> pre1(m), hidden1(m), pre2(m), hidden2(m);
    for (int i = 0; i < m; ++i) {
        Vec p1 = c.l1.b;
        matvec_block(c.l1.w, 0, 4, features[i].data(), p1.data(), true);
        Vec h1 = p1;
        for (double& v : h1)
            if (v < 0) v = 0;
        Vec p2 = c.l2.b;
        matvec_block(c.l2.w, 0, d, h1.data(), p2.data(), true);
        Vec h2 = p2;
        for (double& v : h2)
            if (v < 0) v = 0;
        total += dot(c.head_w.data(), h2.data(), d);
        pre1[i] = std::move(p1);
        hidden1[i] = std::move(h1);
        pre2[i] = std::move(p2);
        hidden2[i] = std::move(h2);
    }
    if (trace) {
        trace->features = features;
        trace->pre1 = std::move(pre1);
        trace->hidden1 = std::move(hidden1);
        trace->pre2 = std::move(pre2);
        trace->hidden2 = std::move(hidden2);
        trace->output = total;
    }
    return total;
}

void critic_backward(const CriticParameters& c, const CriticTrace& trace, double weight,
                     CriticParameters& grad) {
    if (weight == 0.0) return;
    const int m = static_cast<int>(trace.features.size());
    const int d = c.hidden;
    grad.head_b[0] += weight * m;
    for (int i = 0; i < m; ++i) {
        add_scaled(grad.head_w, trace.hidden2[i], weight);
        Vec d2(d);
        for (int k = 0; k < d; ++k) d2[k] = trace.pre2[i][k] > 0 ? weight * c.head_w[k] : 0.0;
        for (int k = 0; k < d; ++k) grad.l2.b[k] += d2[k];
        outer_block_add(grad.l2.w, 0, d, d2.data(), trace.hidden1[i].data());
        Vec d1(d, 0.0);
        tmatvec_block_add(c.l2.w, 0, d, d2.data(), d1.data());
        for (int k = 0; k < d; ++k)
            if (trace.pre1[i][k] <= 0) d1[k] = 0;
        for (int k = 0; k < d; ++k) grad.l1.b[k] += d1[k];
        outer_block_add(grad.l1.w, 0, 4, d1.data(), trace.features[i].data());
    }
}

}  // namespace nlns
