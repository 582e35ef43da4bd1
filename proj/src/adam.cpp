#include "dqnn/adam.hpp"

#include <cmath>
#include <string>

namespace dqnn {

namespace {

void adam_update_slice(AdamState& state, std::size_t offset, std::span<double> params,
                       std::span<const double> grads, double inv_bias1,
                       double inv_bias2) {
    if (params.size() != grads.size())
        throw ShapeError("adam: parameter/gradient length mismatch");
    if (offset + params.size() > state.m.size())
        throw ShapeError("adam: state holds " + std::to_string(state.m.size()) +
                         " moments, update reaches " +
                         std::to_string(offset + params.size()));
    const AdamConfig& cfg = state.cfg;
    for (std::size_t i = 0; i < params.size(); ++i) {
        double& m = state.m[offset + i];
        double& v = state.v[offset + i];
        const double g = grads[i];
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m * inv_bias1;
        const double v_hat = v * inv_bias2;
        params[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
}

} // namespace

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads) {
    if (params.size() != state.m.size())
        throw ShapeError("adam: flat update must cover all " +
                         std::to_string(state.m.size()) + " parameters");
    ++state.step_count;
    const double inv_bias1 = 1.0 / (1.0 - std::pow(state.cfg.beta1, state.step_count));
    const double inv_bias2 = 1.0 / (1.0 - std::pow(state.cfg.beta2, state.step_count));
    adam_update_slice(state, 0, params, grads, inv_bias1, inv_bias2);
}

void adam_step(AdamState& state, std::vector<std::vector<double>>& shard_params,
               const std::vector<GradientVector>& shard_grads) {
    if (shard_params.size() != shard_grads.size())
        throw ShapeError("adam: shard count mismatch");
    ++state.step_count;
    const double inv_bias1 = 1.0 / (1.0 - std::pow(state.cfg.beta1, state.step_count));
    const double inv_bias2 = 1.0 / (1.0 - std::pow(state.cfg.beta2, state.step_count));
    std::size_t offset = 0;
    for (std::size_t j = 0; j < shard_params.size(); ++j) {
        adam_update_slice(state, offset, shard_params[j], shard_grads[j], inv_bias1,
                          inv_bias2);
        offset += shard_params[j].size();
    }
    if (offset != state.m.size())
        throw ShapeError("adam: shard parameters do not cover the moment vectors");
}

} // namespace dqnn
