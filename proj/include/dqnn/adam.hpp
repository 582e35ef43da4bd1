#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dqnn/errors.hpp"
#include "dqnn/gradients.hpp"

namespace dqnn {

struct AdamConfig {
    double lr = 0.005;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Moment vectors span the concatenation of all shard parameter vectors.
struct AdamState {
    AdamConfig cfg;
    std::vector<double> m, v;
    long step_count = 0;

    explicit AdamState(std::size_t n_params, AdamConfig cfg_ = {})
        : cfg(cfg_), m(n_params, 0.0), v(n_params, 0.0) {}
};

/// One bias-corrected Adam update over a flat parameter vector.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads);

/// Multi-shard form: updates each shard's slice of the flat moment vectors in
/// shard order; the step counter advances once.
void adam_step(AdamState& state, std::vector<std::vector<double>>& shard_params,
               const std::vector<GradientVector>& shard_grads);

} // namespace dqnn
