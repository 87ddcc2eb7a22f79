#pragma once

#include <cstdint>
#include <vector>

#include "nlns/policy_net.hpp"

namespace nlns {

// Adam state over a flat view of the parameter tensors. Moment vectors are
// laid out in param_views order.
struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int64_t step = 0;
    Vec m;
    Vec v;
};

// One Adam update: params -= lr * m_hat / (sqrt(v_hat) + eps). The views of
// params and grads must line up tensor by tensor.
void adam_step(std::vector<ParamView> params, std::vector<ParamView> grads, AdamState& state,
               double lr);

}  // namespace nlns
