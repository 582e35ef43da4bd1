#include "dqnn/gradients.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dqnn {

namespace {

void check_shapes(const QnnArchitecture& arch, std::span<const double> params,
                  std::span<const double> features) {
    if (params.size() != static_cast<std::size_t>(arch.n_params))
        throw ShapeError("gradient: expected " + std::to_string(arch.n_params) +
                         " params, got " + std::to_string(params.size()));
    if (features.size() != static_cast<std::size_t>(arch.n_features))
        throw ShapeError("gradient: expected " + std::to_string(arch.n_features) +
                         " features, got " + std::to_string(features.size()));
}

double forward_expectation(const QnnArchitecture& arch, std::span<const double> params,
                           std::span<const double> features, const Observable& obs) {
    StateVector state(arch.n_qubits);
    run_program(state, arch, params, features);
    return state.expectation(obs);
}

void apply_inverse(StateVector& state, const GateOp& op,
                   std::span<const double> features, std::span<const double> params) {
    switch (op.kind) {
    case GateKind::Cz:
        state.apply_cz(op.control, op.target);
        return;
    case GateKind::Rx:
    case GateKind::Ry: {
        const auto& src = op.source == AngleSource::Feature ? features : params;
        const double theta = src[op.index - 1];
        if (op.kind == GateKind::Rx)
            state.apply_rx(op.target, -theta);
        else
            state.apply_ry(op.target, -theta);
        return;
    }
    }
}

PauliKind generator_of(GateKind kind) {
    return kind == GateKind::Rx ? PauliKind::X : PauliKind::Y;
}

// Reverse sweep shared by both adjoint entry points. `lambdas` enter as
// O_k|psi> (or the weighted sum of those) and are peeled back in lockstep with
// the ket. At each trainable rotation, d<O>/dtheta = Im(<lambda| G |ket>) with
// G the Pauli generator, because dU/dtheta = -i/2 G U.
//
// Full rotation rows are handled as fused layers: every row gradient is read
// off at the post-layer point (cross-qubit rotations commute with the
// generators), with the RX generator conjugated through its own qubit's RY as
// RY X RY^dag = cos(y) X - sin(y) Z; both states then unwind through one
// fused SU(2) pass per qubit instead of two rotation passes.
template <class Emit>
void adjoint_sweep(const QnnArchitecture& arch, std::span<const double> params,
                   std::span<const double> features, StateVector& ket,
                   std::span<StateVector> lambdas, const Emit& emit) {
    const auto& program = arch.program;
    const auto n = static_cast<std::size_t>(arch.n_qubits);
    std::size_t g = program.size();
    while (g > 0) {
        if (g >= 2 * n && detail::rotation_rows_at(program, g - 2 * n, arch.n_qubits)) {
            const std::size_t row = g - 2 * n;
            for (std::size_t q = 0; q < n; ++q) {
                const int qubit = static_cast<int>(q) + 1;
                const GateOp& ry_op = program[row + n + q];
                if (ry_op.trainable())
                    for (std::size_t k = 0; k < lambdas.size(); ++k)
                        emit(k, ry_op.index - 1,
                             im_inner_pauli(lambdas[k], ket, PauliKind::Y, qubit));
                const GateOp& rx_op = program[row + q];
                if (rx_op.trainable()) {
                    const double ty = detail::resolve_angle(ry_op, features, params);
                    const double cy = std::cos(ty), sy = std::sin(ty);
                    for (std::size_t k = 0; k < lambdas.size(); ++k)
                        emit(k, rx_op.index - 1,
                             cy * im_inner_pauli(lambdas[k], ket, PauliKind::X, qubit) -
                                 sy * im_inner_pauli(lambdas[k], ket, PauliKind::Z,
                                                     qubit));
                }
            }
            for (std::size_t q = 0; q < n; ++q) {
                const double tx = detail::resolve_angle(program[row + q], features, params);
                const double ty =
                    detail::resolve_angle(program[row + n + q], features, params);
                const auto u = detail::su2_adjoint(detail::fused_rotation(tx, ty));
                ket.apply_su2(static_cast<int>(q) + 1, u.u00, u.u01, u.u10, u.u11);
                for (StateVector& lambda : lambdas)
                    lambda.apply_su2(static_cast<int>(q) + 1, u.u00, u.u01, u.u10,
                                     u.u11);
            }
            g = row;
            continue;
        }

        const GateOp& op = program[--g];
        if (op.trainable()) {
            const PauliKind gen = generator_of(op.kind);
            for (std::size_t k = 0; k < lambdas.size(); ++k)
                emit(k, op.index - 1, im_inner_pauli(lambdas[k], ket, gen, op.target));
        }
        apply_inverse(ket, op, features, params);
        for (StateVector& lambda : lambdas)
            apply_inverse(lambda, op, features, params);
    }
}

} // namespace

std::vector<GradientVector> adjoint_grad(const QnnArchitecture& arch,
                                         std::span<const double> params,
                                         std::span<const double> features,
                                         std::span<const Observable> observables) {
    check_shapes(arch, params, features);
    StateVector ket(arch.n_qubits);
    run_program(ket, arch, params, features);

    std::vector<StateVector> lambdas(observables.size(), ket);
    for (std::size_t k = 0; k < observables.size(); ++k)
        lambdas[k].apply_pauli(observables[k].kind, observables[k].qubit);

    std::vector<GradientVector> grads(observables.size(),
                                      GradientVector(arch.n_params, 0.0));
    adjoint_sweep(arch, params, features, ket, lambdas,
                  [&](std::size_t k, int p, double v) { grads[k][p] = v; });
    return grads;
}

ShardTape::ShardTape(const QnnArchitecture& arch, std::span<const double> params,
                     std::span<const double> features,
                     std::span<const Observable> observables)
    : arch_(&arch), params_(params), features_(features), observables_(observables),
      ket_(arch.n_qubits) {
    check_shapes(arch, params, features);
    run_program(ket_, arch, params, features);
    expectations_.resize(observables.size());
    for (std::size_t k = 0; k < observables.size(); ++k)
        expectations_[k] = ket_.expectation(observables[k]);
}

GradientVector ShardTape::weighted_grad(std::span<const double> weights) const {
    if (weights.size() != observables_.size())
        throw ShapeError("weighted_grad: one weight per observable required");

    // lambda = sum_k w_k O_k |psi>; the sweep then yields the weighted gradient
    // directly (everything downstream is linear in lambda).
    StateVector ket = ket_;
    StateVector lambda = ket;
    lambda.clear();
    StateVector scratch = ket;
    for (std::size_t k = 0; k < observables_.size(); ++k) {
        if (weights[k] == 0.0) continue;
        scratch = ket_;
        scratch.apply_pauli(observables_[k].kind, observables_[k].qubit);
        lambda.add_scaled(scratch, weights[k]);
    }

    GradientVector grad(arch_->n_params, 0.0);
    adjoint_sweep(*arch_, params_, features_, ket, std::span<StateVector>(&lambda, 1),
                  [&](std::size_t, int p, double v) { grad[p] = v; });
    return grad;
}

GradientVector adjoint_weighted_grad(const QnnArchitecture& arch,
                                     std::span<const double> params,
                                     std::span<const double> features,
                                     std::span<const Observable> observables,
                                     std::span<const double> weights) {
    return ShardTape(arch, params, features, observables).weighted_grad(weights);
}

GradientVector parameter_shift_grad(const QnnArchitecture& arch,
                                    std::span<const double> params,
                                    std::span<const double> features,
                                    const Observable& obs) {
    check_shapes(arch, params, features);
    std::vector<double> shifted(params.begin(), params.end());
    GradientVector grad(arch.n_params, 0.0);
    for (const GateOp& op : arch.program) {
        if (!op.trainable()) continue;
        const int p = op.index - 1;
        const double original = shifted[p];
        shifted[p] = original + std::numbers::pi / 2.0;
        const double plus = forward_expectation(arch, shifted, features, obs);
        shifted[p] = original - std::numbers::pi / 2.0;
        const double minus = forward_expectation(arch, shifted, features, obs);
        shifted[p] = original;
        grad[p] = 0.5 * (plus - minus);
    }
    return grad;
}

GradientVector finite_diff_grad(const QnnArchitecture& arch,
                                std::span<const double> params,
                                std::span<const double> features,
                                const Observable& obs, double h) {
    if (!(h >= 1e-7 && h <= 1e-2))
        throw RangeError("finite_diff_grad: step h must lie in [1e-7, 1e-2]");
    check_shapes(arch, params, features);
    std::vector<double> shifted(params.begin(), params.end());
    GradientVector grad(arch.n_params, 0.0);
    for (int p = 0; p < arch.n_params; ++p) {
        const double original = shifted[p];
        shifted[p] = original + h;
        const double plus = forward_expectation(arch, shifted, features, obs);
        shifted[p] = original - h;
        const double minus = forward_expectation(arch, shifted, features, obs);
        shifted[p] = original;
        grad[p] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

} // namespace dqnn
