#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dqnn/gate_op.hpp"

namespace dqnn {

/// Dense statevector over n qubits.
///
/// Amplitude index i encodes the basis state |q_n ... q_2 q_1> with qubit 1
/// stored in the least significant bit of i (little endian). All public qubit
/// arguments are 1-based; bit position = qubit - 1. Real and imaginary parts
/// are kept in separate arrays so the gate kernels vectorize.
class StateVector {
  public:
    static constexpr int kDefaultMaxQubits = 24; // 2^24 amplitudes = 512 MiB

    /// Prepares |0...0>.
    explicit StateVector(int n_qubits, int max_qubits = kDefaultMaxQubits);

    int num_qubits() const { return n_qubits_; }
    std::size_t size() const { return re_.size(); }

    std::complex<double> amplitude(std::size_t i) const { return {re_[i], im_[i]}; }
    std::vector<std::complex<double>> amplitudes() const;
    void set_amplitudes(std::span<const std::complex<double>> amps);

    std::span<const double> reals() const { return re_; }
    std::span<const double> imags() const { return im_; }

    void reset_zero_state();
    /// Sets every amplitude to 0 (not a valid state until written to).
    void clear();
    /// this += w * other.
    void add_scaled(const StateVector& other, double w);

    /// exp(-i theta X/2) on `qubit` (1-based).
    void apply_rx(int qubit, double theta);
    /// exp(-i theta Y/2) on `qubit` (1-based).
    void apply_ry(int qubit, double theta);
    /// Phase -1 on every basis state with both qubits 1. Symmetric in its arguments.
    void apply_cz(int control, int target);
    /// Pauli gate (generator application for gradient sweeps).
    void apply_pauli(PauliKind kind, int qubit);
    /// Arbitrary single-qubit unitary [[u00, u01], [u10, u11]]; lets callers
    /// fuse adjacent same-qubit rotations into one pass over the state.
    void apply_su2(int qubit, std::complex<double> u00, std::complex<double> u01,
                   std::complex<double> u10, std::complex<double> u11);

    /// Applies one program gate, resolving its angle from `features`/`params`.
    void apply(const GateOp& op, std::span<const double> features,
               std::span<const double> params);

    /// <psi|O|psi>, exactly real for Pauli observables.
    double expectation(const Observable& obs) const;

    double norm_sq() const;

  private:
    void check_qubit(int qubit) const;
    std::size_t stride_of(int qubit) const { return std::size_t{1} << (qubit - 1); }

    int n_qubits_;
    std::vector<double> re_, im_;
};

/// <a|b> = sum conj(a_i) b_i.
std::complex<double> inner_product(const StateVector& a, const StateVector& b);

/// Im(<lambda| P_qubit |psi>) without materializing P|psi>. This is the
/// quantity the adjoint sweep accumulates per trainable rotation.
double im_inner_pauli(const StateVector& lambda, const StateVector& psi,
                      PauliKind kind, int qubit);

} // namespace dqnn
