#pragma once

#include <string>
#include <vector>

#include "dqnn/state_vector.hpp"

namespace dqnn {

enum class BlockKind : std::uint8_t { Encoding, Variational };

/// Whether the entangling ring is dropped from just the final layer of the
/// last variational block, or from every layer of that block.
enum class FinalRingScope : std::uint8_t { LastLayer, LastBlock };

struct Block {
    BlockKind kind{};
    std::size_t first_gate = 0; // offset into QnnArchitecture::program
    std::size_t gate_count = 0;
    int layers = 0;
};

/// Static gate program of one shard: alternating variational and encoding
/// blocks over `n_qubits` wires, consuming `n_features` encoding angles and
/// `n_params` trainable angles exactly once each.
struct QnnArchitecture {
    int n_qubits = 0;
    int n_features = 0;
    int n_params = 0;
    int layers_per_block = 0;
    FinalRingScope final_ring_scope = FinalRingScope::LastLayer;
    std::vector<Block> blocks;
    std::vector<GateOp> program; // execution order
};

/// Layers stacked inside every variational block of the paper architecture.
inline constexpr int kVariationalLayers = 20;

/// Builds the shard architecture: U_phi, U_x, U_phi, ..., U_x, U_phi with
/// n_features/(2 n_qubits) encoding blocks, `kVariationalLayers`-deep
/// variational blocks, and the final entangling ring omitted.
///
/// `min_qubits` guards the stock observable set (X1..X5, Z1..Z5 reach qubit 5);
/// tests with injected observables may relax it.
QnnArchitecture build_architecture(int n_qubits, int n_features,
                                   FinalRingScope scope = FinalRingScope::LastLayer,
                                   int min_qubits = 5);

/// Same block family with configurable variational depth. Gradient checks use
/// small instances; the paper architecture itself is fixed at 20 layers.
QnnArchitecture build_layered_architecture(int n_qubits, int n_features,
                                           int layers_per_block,
                                           FinalRingScope scope = FinalRingScope::LastLayer,
                                           int min_qubits = 5);

int num_parameters(const QnnArchitecture& arch);

/// Deterministic textual gate listing (golden-file stable).
std::string describe(const QnnArchitecture& arch);

/// Applies the whole program to `state`.
void run_program(StateVector& state, const QnnArchitecture& arch,
                 std::span<const double> params, std::span<const double> features);

/// Runs the program on |0...0> and evaluates every observable on the final state.
std::vector<double> shard_forward(const QnnArchitecture& arch,
                                  std::span<const double> params,
                                  std::span<const double> features,
                                  std::span<const Observable> observables);

namespace detail {

/// True when program[i .. i+2n) is an RX row then an RY row over qubits 1..n
/// (the layer layout every built architecture emits). Rotations on distinct
/// qubits commute, so such rows fuse into one SU(2) pass per qubit.
bool rotation_rows_at(std::span<const GateOp> program, std::size_t i, int n_qubits);

struct Su2 {
    std::complex<double> u00, u01, u10, u11;
};

/// RY(theta_y) * RX(theta_x).
Su2 fused_rotation(double theta_x, double theta_y);
Su2 su2_adjoint(const Su2& u);

double resolve_angle(const GateOp& op, std::span<const double> features,
                     std::span<const double> params);

} // namespace detail

} // namespace dqnn
