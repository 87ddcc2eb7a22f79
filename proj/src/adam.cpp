#include "nlns/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace nlns {

void adam_step(std::vector<ParamView> params, std::vector<ParamView> grads, AdamState& state,
               double lr) {
    if (params.size() != grads.size()) throw std::invalid_argument("parameter/gradient mismatch");
    size_t total = 0;
    for (const auto& p : params) total += p.data->size();
    if (state.m.empty()) {
        state.m.assign(total, 0.0);
        state.v.assign(total, 0.0);
    } else if (state.m.size() != total) {
        throw std::invalid_argument("optimizer state does not match parameter count");
    }

    ++state.step;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

    size_t off = 0;
    for (size_t t = 0; t < params.size(); ++t) {
        Vec& p = *params[t].data;
        const Vec& g = *grads[t].data;
        if (p.size() != g.size()) throw std::invalid_argument("gradient shape mismatch");
        for (size_t i = 0; i < p.size(); ++i, ++off) {
            double gi = g[i];
            state.m[off] = state.beta1 * state.m[off] + (1.0 - state.beta1) * gi;
            state.v[off] = state.beta2 * state.v[off] + (1.0 - state.beta2) * gi * gi;
            double mhat = state.m[off] / bc1;
            double vhat = state.v[off] / bc2;
            p[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

}  // namespace nlns
