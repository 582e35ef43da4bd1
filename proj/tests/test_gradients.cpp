#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dqnn/gradients.hpp"
#include "support/random_circuits.hpp"

using namespace dqnn;

namespace {

// Single RX(theta) on one qubit, measured in Z: <Z> = cos(theta).
QnnArchitecture single_rx_arch() {
    QnnArchitecture arch;
    arch.n_qubits = 1;
    arch.n_features = 0;
    arch.n_params = 1;
    arch.layers_per_block = 0;
    arch.program = {GateOp::rx(1, AngleSource::Param, 1)};
    return arch;
}

} // namespace

TEST_CASE("parameter shift on the single-rotation circuit") {
    const auto arch = single_rx_arch();
    const std::vector<double> params{0.7};
    const Observable z1{PauliKind::Z, 1};
    const auto grad = parameter_shift_grad(arch, params, {}, z1);
    REQUIRE(grad.size() == 1);
    CHECK(grad[0] == doctest::Approx(-std::sin(0.7)).epsilon(1e-12));
}

TEST_CASE("parameters outside the measured light cone have zero gradient") {
    // Two disconnected qubits (no entangler): rotations on qubit 2 cannot
    // influence <Z1>.
    QnnArchitecture arch;
    arch.n_qubits = 2;
    arch.n_features = 0;
    arch.n_params = 2;
    arch.program = {GateOp::rx(1, AngleSource::Param, 1),
                    GateOp::ry(2, AngleSource::Param, 2)};
    const std::vector<double> params{0.4, 1.1};
    const Observable z1{PauliKind::Z, 1};

    const auto shift = parameter_shift_grad(arch, params, {}, z1);
    CHECK(shift[1] == doctest::Approx(0.0).epsilon(1e-15));
    const auto adj = adjoint_grad(arch, params, {}, std::span<const Observable>(&z1, 1));
    CHECK(adj[0][1] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("parameter shift matches finite differences on random circuits") {
    Rng rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = test::random_instance(rng, /*max_qubits=*/4, /*max_layers=*/2);
        const Observable obs{rng.below(2) == 0 ? PauliKind::X : PauliKind::Z,
                             1 + static_cast<int>(rng.below(inst.arch.n_qubits))};
        const auto shift = parameter_shift_grad(inst.arch, inst.params, inst.features, obs);
        const auto fd = finite_diff_grad(inst.arch, inst.params, inst.features, obs, 1e-4);
        for (int p = 0; p < inst.arch.n_params; ++p) {
            const double scale = std::max(1.0, std::abs(shift[p]));
            CHECK(std::abs(shift[p] - fd[p]) / scale <= 1e-6);
        }
    }
}

TEST_CASE("adjoint equals parameter shift on 50 random instances") {
    Rng rng(321);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = test::random_instance(rng, /*max_qubits=*/5, /*max_layers=*/3);
        const Observable obs{rng.below(2) == 0 ? PauliKind::X : PauliKind::Z,
                             1 + static_cast<int>(rng.below(inst.arch.n_qubits))};
        const auto adj = adjoint_grad(inst.arch, inst.params, inst.features,
                                      std::span<const Observable>(&obs, 1))[0];
        const auto shift =
            parameter_shift_grad(inst.arch, inst.params, inst.features, obs);
        for (int p = 0; p < inst.arch.n_params; ++p)
            worst = std::max(worst, std::abs(adj[p] - shift[p]));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("zero-depth variational block yields an empty gradient") {
    QnnArchitecture arch;
    arch.n_qubits = 2;
    arch.n_features = 4;
    arch.n_params = 0;
    arch.program = {GateOp::rx(1, AngleSource::Feature, 1),
                    GateOp::rx(2, AngleSource::Feature, 2),
                    GateOp::ry(1, AngleSource::Feature, 3),
                    GateOp::ry(2, AngleSource::Feature, 4), GateOp::cz(1, 2)};
    const std::vector<double> features{0.1, 0.2, 0.3, 0.4};
    const Observable z1{PauliKind::Z, 1};

    CHECK(parameter_shift_grad(arch, {}, features, z1).empty());
    CHECK(finite_diff_grad(arch, {}, features, z1, 1e-4).empty());
    const auto adj = adjoint_grad(arch, {}, features, std::span<const Observable>(&z1, 1));
    CHECK(adj[0].empty());
}

TEST_CASE("encoding angles are excluded from the gradient length") {
    const auto arch = build_layered_architecture(3, 6, 2, FinalRingScope::LastLayer, 2);
    std::vector<double> params(arch.n_params, 0.5), features(arch.n_features, 0.25);
    const Observable z1{PauliKind::Z, 1};
    const auto grad = parameter_shift_grad(arch, params, features, z1);
    CHECK(grad.size() == static_cast<std::size_t>(arch.n_params));
}

TEST_CASE("finite difference step guard") {
    const auto arch = single_rx_arch();
    const std::vector<double> params{0.3};
    const Observable z1{PauliKind::Z, 1};
    CHECK_THROWS_AS(finite_diff_grad(arch, params, {}, z1, 1e-8), RangeError);
    CHECK_THROWS_AS(finite_diff_grad(arch, params, {}, z1, 0.5), RangeError);
    CHECK_NOTHROW(finite_diff_grad(arch, params, {}, z1, 1e-4));
}

TEST_CASE("constant output circuit has an all-zero gradient") {
    // Observable on a qubit no gate touches.
    QnnArchitecture arch;
    arch.n_qubits = 3;
    arch.n_features = 0;
    arch.n_params = 2;
    arch.program = {GateOp::rx(1, AngleSource::Param, 1),
                    GateOp::ry(1, AngleSource::Param, 2)};
    const std::vector<double> params{0.9, -0.2};
    const Observable z3{PauliKind::Z, 3};
    // central differences of a constant leave only fp cancellation noise
    for (double g : finite_diff_grad(arch, params, {}, z3, 1e-4))
        CHECK(std::abs(g) <= 1e-9);
}

TEST_CASE("three-way agreement across engines up to 6 qubits") {
    Rng rng(777);
    double adj_vs_shift = 0.0, adj_vs_fd = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
        const auto inst = test::random_instance(rng, /*max_qubits=*/6, /*max_layers=*/4);
        REQUIRE(inst.arch.n_params <= 200);
        const Observable obs{rng.below(2) == 0 ? PauliKind::X : PauliKind::Z,
                             1 + static_cast<int>(rng.below(inst.arch.n_qubits))};
        const auto adj = adjoint_grad(inst.arch, inst.params, inst.features,
                                      std::span<const Observable>(&obs, 1))[0];
        const auto shift =
            parameter_shift_grad(inst.arch, inst.params, inst.features, obs);
        const auto fd = finite_diff_grad(inst.arch, inst.params, inst.features, obs, 1e-4);
        for (int p = 0; p < inst.arch.n_params; ++p) {
            adj_vs_shift = std::max(adj_vs_shift, std::abs(adj[p] - shift[p]));
            adj_vs_fd = std::max(adj_vs_fd, std::abs(adj[p] - fd[p]));
        }
    }
    CHECK(adj_vs_shift <= 1e-10);
    CHECK(adj_vs_fd <= 1e-4);
}

TEST_CASE("adjoint handles multiple observables in one sweep") {
    Rng rng(55);
    const auto inst = test::random_instance(rng, 4, 2);
    const auto obs = std::vector<Observable>{{PauliKind::X, 1},
                                             {PauliKind::Z, 2},
                                             {PauliKind::X, 3},
                                             {PauliKind::Z, 1}};
    const auto all = adjoint_grad(inst.arch, inst.params, inst.features, obs);
    REQUIRE(all.size() == obs.size());
    for (std::size_t k = 0; k < obs.size(); ++k) {
        const auto shift =
            parameter_shift_grad(inst.arch, inst.params, inst.features, obs[k]);
        for (int p = 0; p < inst.arch.n_params; ++p)
            CHECK(all[k][p] == doctest::Approx(shift[p]).epsilon(1e-10));
    }
}

TEST_CASE("weighted adjoint equals the weighted sum of per-observable gradients") {
    Rng rng(66);
    const auto inst = test::random_instance(rng, 5, 2);
    const auto obs = default_observables();
    std::vector<Observable> in_range;
    for (const Observable& o : obs)
        if (o.qubit <= inst.arch.n_qubits) in_range.push_back(o);

    std::vector<double> weights(in_range.size());
    for (double& w : weights) w = rng.uniform(-2.0, 2.0);

    const auto combined = adjoint_weighted_grad(inst.arch, inst.params, inst.features,
                                                in_range, weights);
    const auto per_obs = adjoint_grad(inst.arch, inst.params, inst.features, in_range);
    for (int p = 0; p < inst.arch.n_params; ++p) {
        double expected = 0.0;
        for (std::size_t k = 0; k < in_range.size(); ++k)
            expected += weights[k] * per_obs[k][p];
        CHECK(combined[p] == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("gradients are bit-identical across repeated evaluation") {
    Rng rng(88);
    const auto inst = test::random_instance(rng, 5, 3);
    const auto obs = std::vector<Observable>{{PauliKind::Z, 1}, {PauliKind::X, 2}};
    const auto a = adjoint_grad(inst.arch, inst.params, inst.features, obs);
    const auto b = adjoint_grad(inst.arch, inst.params, inst.features, obs);
    for (std::size_t k = 0; k < obs.size(); ++k)
        for (int p = 0; p < inst.arch.n_params; ++p) CHECK(a[k][p] == b[k][p]);
}

TEST_CASE("gradient shape guards") {
    const auto arch = build_layered_architecture(3, 6, 1, FinalRingScope::LastLayer, 2);
    std::vector<double> params(arch.n_params, 0.1), features(arch.n_features, 0.1);
    std::vector<double> bad_params(arch.n_params + 1, 0.1);
    const Observable z1{PauliKind::Z, 1};
    CHECK_THROWS_AS(parameter_shift_grad(arch, bad_params, features, z1), ShapeError);
    CHECK_THROWS_AS(adjoint_grad(arch, params, std::vector<double>(2, 0.0),
                                 std::span<const Observable>(&z1, 1)),
                    ShapeError);
}
