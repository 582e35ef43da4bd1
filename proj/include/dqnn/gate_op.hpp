#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dqnn/errors.hpp"

namespace dqnn {

enum class GateKind : std::uint8_t { Rx, Ry, Cz };
enum class AngleSource : std::uint8_t { Feature, Param };
enum class PauliKind : std::uint8_t { X, Y, Z };

/// One gate of a shard program. Qubits and feature/param indices are 1-based,
/// matching the circuit notation (qubit 1 = least significant amplitude bit).
struct GateOp {
    GateKind kind{};
    AngleSource source{}; // Rx/Ry only
    int target = 0;       // 1-based qubit
    int control = 0;      // 1-based qubit, Cz only
    int index = 0;        // 1-based feature/param index, Rx/Ry only

    static GateOp rx(int target, AngleSource source, int index) {
        return {GateKind::Rx, source, target, 0, index};
    }
    static GateOp ry(int target, AngleSource source, int index) {
        return {GateKind::Ry, source, target, 0, index};
    }
    static GateOp cz(int control, int target) {
        if (control == target)
            throw WiringError("cz: control and target must differ (got qubit " +
                              std::to_string(control) + " twice)");
        return {GateKind::Cz, AngleSource::Feature, target, control, 0};
    }

    bool is_rotation() const { return kind != GateKind::Cz; }
    bool trainable() const { return is_rotation() && source == AngleSource::Param; }
};

/// Single-qubit Pauli measurement. Only X and Z appear as observables;
/// Y exists as a rotation generator.
struct Observable {
    PauliKind kind{};
    int qubit = 0; // 1-based

    Observable() = default;
    Observable(PauliKind kind_, int qubit_) : kind(kind_), qubit(qubit_) {
        if (kind == PauliKind::Y)
            throw ConfigError("observable: Pauli Y is not in the measurement set");
        if (qubit < 1)
            throw WiringError("observable: qubit index must be >= 1");
    }

    std::string name() const {
        return (kind == PauliKind::X ? "X" : "Z") + std::to_string(qubit);
    }
};

/// The stock measurement set {X1..X5, Z1..Z5} whose expectations form the
/// ten-class logit vector.
inline std::vector<Observable> default_observables() {
    std::vector<Observable> obs;
    obs.reserve(10);
    for (int q = 1; q <= 5; ++q) obs.emplace_back(PauliKind::X, q);
    for (int q = 1; q <= 5; ++q) obs.emplace_back(PauliKind::Z, q);
    return obs;
}

} // namespace dqnn
