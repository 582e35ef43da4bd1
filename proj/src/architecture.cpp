#include "dqnn/architecture.hpp"

#include <sstream>

namespace dqnn {

namespace {

void append_ring(std::vector<GateOp>& program, int n_qubits) {
    for (int i = 1; i <= n_qubits; ++i)
        program.push_back(GateOp::cz(i, (i % n_qubits) + 1));
}

void append_rotation_rows(std::vector<GateOp>& program, int n_qubits,
                          AngleSource source, int& next_index) {
    for (int q = 1; q <= n_qubits; ++q)
        program.push_back(GateOp::rx(q, source, next_index++));
    for (int q = 1; q <= n_qubits; ++q)
        program.push_back(GateOp::ry(q, source, next_index++));
}

} // namespace

QnnArchitecture build_layered_architecture(int n_qubits, int n_features,
                                           int layers_per_block,
                                           FinalRingScope scope, int min_qubits) {
    if (n_qubits < 2)
        throw ConfigError("architecture: need at least 2 qubits for the entangling ring");
    if (n_qubits < min_qubits)
        throw ConfigError("architecture: n_qubits = " + std::to_string(n_qubits) +
                          " but the observable set reaches qubit " +
                          std::to_string(min_qubits));
    if (layers_per_block < 1)
        throw ConfigError("architecture: layers_per_block must be >= 1");
    if (n_features < 1 || n_features % (2 * n_qubits) != 0)
        throw ConfigError("architecture: n_features = " + std::to_string(n_features) +
                          " is not a positive multiple of 2*n_qubits = " +
                          std::to_string(2 * n_qubits));

    const int n_encoding = n_features / (2 * n_qubits);
    const int n_variational = n_encoding + 1;

    QnnArchitecture arch;
    arch.n_qubits = n_qubits;
    arch.n_features = n_features;
    arch.n_params = n_variational * layers_per_block * 2 * n_qubits;
    arch.layers_per_block = layers_per_block;
    arch.final_ring_scope = scope;

    int next_param = 1;
    int next_feature = 1;
    for (int b = 0; b < n_variational; ++b) {
        const bool last_block = b == n_variational - 1;
        Block block{BlockKind::Variational, arch.program.size(), 0, layers_per_block};
        for (int layer = 1; layer <= layers_per_block; ++layer) {
            append_rotation_rows(arch.program, n_qubits, AngleSource::Param, next_param);
            const bool omit_ring =
                last_block && (scope == FinalRingScope::LastBlock ||
                               layer == layers_per_block);
            if (!omit_ring) append_ring(arch.program, n_qubits);
        }
        block.gate_count = arch.program.size() - block.first_gate;
        arch.blocks.push_back(block);

        if (!last_block) {
            Block enc{BlockKind::Encoding, arch.program.size(), 0, 1};
            append_rotation_rows(arch.program, n_qubits, AngleSource::Feature,
                                 next_feature);
            append_ring(arch.program, n_qubits);
            enc.gate_count = arch.program.size() - enc.first_gate;
            arch.blocks.push_back(enc);
        }
    }
    return arch;
}

QnnArchitecture build_architecture(int n_qubits, int n_features,
                                   FinalRingScope scope, int min_qubits) {
    return build_layered_architecture(n_qubits, n_features, kVariationalLayers,
                                      scope, min_qubits);
}

int num_parameters(const QnnArchitecture& arch) { return arch.n_params; }

std::string describe(const QnnArchitecture& arch) {
    std::ostringstream out;
    out << "architecture qubits=" << arch.n_qubits << " features=" << arch.n_features
        << " params=" << arch.n_params << " layers_per_block=" << arch.layers_per_block
        << " final_ring="
        << (arch.final_ring_scope == FinalRingScope::LastLayer ? "last_layer"
                                                               : "last_block")
        << '\n';
    for (std::size_t b = 0; b < arch.blocks.size(); ++b) {
        const Block& block = arch.blocks[b];
        out << "block " << b + 1 << ' '
            << (block.kind == BlockKind::Variational ? "variational" : "encoding")
            << " layers=" << block.layers << '\n';
        for (std::size_t g = block.first_gate; g < block.first_gate + block.gate_count;
             ++g) {
            const GateOp& op = arch.program[g];
            switch (op.kind) {
            case GateKind::Rx:
            case GateKind::Ry:
                out << (op.kind == GateKind::Rx ? "rx q" : "ry q") << op.target << ' '
                    << (op.source == AngleSource::Param ? 'p' : 'x') << op.index << '\n';
                break;
            case GateKind::Cz:
                out << "cz q" << op.control << " q" << op.target << '\n';
                break;
            }
        }
    }
    return out.str();
}

namespace detail {

bool rotation_rows_at(std::span<const GateOp> program, std::size_t i, int n_qubits) {
    const auto n = static_cast<std::size_t>(n_qubits);
    if (i + 2 * n > program.size()) return false;
    for (std::size_t q = 0; q < n; ++q) {
        const GateOp& rx = program[i + q];
        const GateOp& ry = program[i + n + q];
        if (rx.kind != GateKind::Rx || rx.target != static_cast<int>(q) + 1) return false;
        if (ry.kind != GateKind::Ry || ry.target != static_cast<int>(q) + 1) return false;
    }
    return true;
}

Su2 fused_rotation(double theta_x, double theta_y) {
    const double cx = std::cos(theta_x / 2.0), sx = std::sin(theta_x / 2.0);
    const double cy = std::cos(theta_y / 2.0), sy = std::sin(theta_y / 2.0);
    return {{cy * cx, sy * sx},
            {-sy * cx, -cy * sx},
            {sy * cx, -cy * sx},
            {cy * cx, -sy * sx}};
}

Su2 su2_adjoint(const Su2& u) {
    return {std::conj(u.u00), std::conj(u.u10), std::conj(u.u01), std::conj(u.u11)};
}

double resolve_angle(const GateOp& op, std::span<const double> features,
                     std::span<const double> params) {
    const auto& src = op.source == AngleSource::Feature ? features : params;
    if (op.index < 1 || static_cast<std::size_t>(op.index) > src.size())
        throw ShapeError("gate angle index " + std::to_string(op.index) +
                         " outside vector of length " + std::to_string(src.size()));
    return src[op.index - 1];
}

} // namespace detail

void run_program(StateVector& state, const QnnArchitecture& arch,
                 std::span<const double> params, std::span<const double> features) {
    const auto& program = arch.program;
    const auto n = static_cast<std::size_t>(arch.n_qubits);
    std::size_t g = 0;
    while (g < program.size()) {
        if (detail::rotation_rows_at(program, g, arch.n_qubits)) {
            for (std::size_t q = 0; q < n; ++q) {
                const double tx = detail::resolve_angle(program[g + q], features, params);
                const double ty =
                    detail::resolve_angle(program[g + n + q], features, params);
                const auto u = detail::fused_rotation(tx, ty);
                state.apply_su2(static_cast<int>(q) + 1, u.u00, u.u01, u.u10, u.u11);
            }
            g += 2 * n;
        } else {
            state.apply(program[g], features, params);
            ++g;
        }
    }
}

std::vector<double> shard_forward(const QnnArchitecture& arch,
                                  std::span<const double> params,
                                  std::span<const double> features,
                                  std::span<const Observable> observables) {
    if (params.size() != static_cast<std::size_t>(arch.n_params))
        throw ShapeError("shard_forward: expected " + std::to_string(arch.n_params) +
                         " params, got " + std::to_string(params.size()));
    if (features.size() != static_cast<std::size_t>(arch.n_features))
        throw ShapeError("shard_forward: expected " + std::to_string(arch.n_features) +
                         " features, got " + std::to_string(features.size()));
    StateVector state(arch.n_qubits);
    run_program(state, arch, params, features);
    std::vector<double> out(observables.size());
    for (std::size_t k = 0; k < observables.size(); ++k)
        out[k] = state.expectation(observables[k]);
    return out;
}

} // namespace dqnn
