#include "dqnn/state_vector.hpp"

#include <cmath>
#include <string>

namespace dqnn {

StateVector::StateVector(int n_qubits, int max_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > max_qubits)
        throw CapacityError("state vector: n_qubits must be in [1, " +
                            std::to_string(max_qubits) + "], got " +
                            std::to_string(n_qubits));
    const std::size_t dim = std::size_t{1} << n_qubits;
    re_.assign(dim, 0.0);
    im_.assign(dim, 0.0);
    re_[0] = 1.0;
}

std::vector<std::complex<double>> StateVector::amplitudes() const {
    std::vector<std::complex<double>> amps(size());
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = {re_[i], im_[i]};
    return amps;
}

void StateVector::set_amplitudes(std::span<const std::complex<double>> amps) {
    if (amps.size() != size())
        throw ShapeError("state vector: expected " + std::to_string(size()) +
                         " amplitudes, got " + std::to_string(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        re_[i] = amps[i].real();
        im_[i] = amps[i].imag();
    }
}

void StateVector::reset_zero_state() {
    std::fill(re_.begin(), re_.end(), 0.0);
    std::fill(im_.begin(), im_.end(), 0.0);
    re_[0] = 1.0;
}

void StateVector::clear() {
    std::fill(re_.begin(), re_.end(), 0.0);
    std::fill(im_.begin(), im_.end(), 0.0);
}

void StateVector::add_scaled(const StateVector& other, double w) {
    if (other.size() != size())
        throw ShapeError("add_scaled: state dimensions differ");
    for (std::size_t i = 0; i < re_.size(); ++i) {
        re_[i] += w * other.re_[i];
        im_[i] += w * other.im_[i];
    }
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 1 || qubit > n_qubits_)
        throw WiringError("qubit " + std::to_string(qubit) + " out of range 1.." +
                          std::to_string(n_qubits_));
}

void StateVector::apply_rx(int qubit, double theta) {
    check_qubit(qubit);
    if (!std::isfinite(theta))
        throw NumericError("rx: non-finite rotation angle");
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const std::size_t stride = stride_of(qubit);
    double* re = re_.data();
    double* im = im_.data();
    for (std::size_t base = 0; base < re_.size(); base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            const double re0 = re[j], im0 = im[j];
            const double re1 = re[j + stride], im1 = im[j + stride];
            // |0>: c*a0 - i s*a1 ; |1>: -i s*a0 + c*a1
            re[j] = c * re0 + s * im1;
            im[j] = c * im0 - s * re1;
            re[j + stride] = s * im0 + c * re1;
            im[j + stride] = c * im1 - s * re0;
        }
    }
}

void StateVector::apply_ry(int qubit, double theta) {
    check_qubit(qubit);
    if (!std::isfinite(theta))
        throw NumericError("ry: non-finite rotation angle");
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const std::size_t stride = stride_of(qubit);
    double* re = re_.data();
    double* im = im_.data();
    for (std::size_t base = 0; base < re_.size(); base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            const double re0 = re[j], im0 = im[j];
            const double re1 = re[j + stride], im1 = im[j + stride];
            // |0>: c*a0 - s*a1 ; |1>: s*a0 + c*a1
            re[j] = c * re0 - s * re1;
            im[j] = c * im0 - s * im1;
            re[j + stride] = s * re0 + c * re1;
            im[j + stride] = s * im0 + c * im1;
        }
    }
}

void StateVector::apply_cz(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target)
        throw WiringError("cz: control and target must differ (got qubit " +
                          std::to_string(control) + " twice)");
    const std::size_t lo = stride_of(std::min(control, target));
    const std::size_t hi = stride_of(std::max(control, target));
    double* re = re_.data();
    double* im = im_.data();
    for (std::size_t a = 0; a < re_.size(); a += 2 * hi) {
        for (std::size_t b = a; b < a + hi; b += 2 * lo) {
            for (std::size_t j = b; j < b + lo; ++j) {
                const std::size_t idx = j + lo + hi;
                re[idx] = -re[idx];
                im[idx] = -im[idx];
            }
        }
    }
}

void StateVector::apply_pauli(PauliKind kind, int qubit) {
    check_qubit(qubit);
    const std::size_t stride = stride_of(qubit);
    double* re = re_.data();
    double* im = im_.data();
    switch (kind) {
    case PauliKind::X:
        for (std::size_t base = 0; base < re_.size(); base += 2 * stride)
            for (std::size_t j = base; j < base + stride; ++j) {
                std::swap(re[j], re[j + stride]);
                std::swap(im[j], im[j + stride]);
            }
        break;
    case PauliKind::Y:
        for (std::size_t base = 0; base < re_.size(); base += 2 * stride)
            for (std::size_t j = base; j < base + stride; ++j) {
                const double re0 = re[j], im0 = im[j];
                const double re1 = re[j + stride], im1 = im[j + stride];
                // |0>: -i*a1 ; |1>: i*a0
                re[j] = im1;
                im[j] = -re1;
                re[j + stride] = -im0;
                im[j + stride] = re0;
            }
        break;
    case PauliKind::Z:
        for (std::size_t base = 0; base < re_.size(); base += 2 * stride)
            for (std::size_t j = base; j < base + stride; ++j) {
                re[j + stride] = -re[j + stride];
                im[j + stride] = -im[j + stride];
            }
        break;
    }
}

void StateVector::apply_su2(int qubit, std::complex<double> u00,
                            std::complex<double> u01, std::complex<double> u10,
                            std::complex<double> u11) {
    check_qubit(qubit);
    const double a00 = u00.real(), b00 = u00.imag();
    const double a01 = u01.real(), b01 = u01.imag();
    const double a10 = u10.real(), b10 = u10.imag();
    const double a11 = u11.real(), b11 = u11.imag();
    const std::size_t stride = stride_of(qubit);
    double* re = re_.data();
    double* im = im_.data();
    for (std::size_t base = 0; base < re_.size(); base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            const double re0 = re[j], im0 = im[j];
            const double re1 = re[j + stride], im1 = im[j + stride];
            re[j] = a00 * re0 - b00 * im0 + a01 * re1 - b01 * im1;
            im[j] = a00 * im0 + b00 * re0 + a01 * im1 + b01 * re1;
            re[j + stride] = a10 * re0 - b10 * im0 + a11 * re1 - b11 * im1;
            im[j + stride] = a10 * im0 + b10 * re0 + a11 * im1 + b11 * re1;
        }
    }
}

void StateVector::apply(const GateOp& op, std::span<const double> features,
                        std::span<const double> params) {
    switch (op.kind) {
    case GateKind::Cz:
        apply_cz(op.control, op.target);
        return;
    case GateKind::Rx:
    case GateKind::Ry: {
        const auto& src = op.source == AngleSource::Feature ? features : params;
        if (op.index < 1 || static_cast<std::size_t>(op.index) > src.size())
            throw ShapeError("gate angle index " + std::to_string(op.index) +
                             " outside vector of length " + std::to_string(src.size()));
        const double theta = src[op.index - 1];
        if (op.kind == GateKind::Rx)
            apply_rx(op.target, theta);
        else
            apply_ry(op.target, theta);
        return;
    }
    }
}

double StateVector::expectation(const Observable& obs) const {
    check_qubit(obs.qubit);
    const std::size_t stride = stride_of(obs.qubit);
    const double* re = re_.data();
    const double* im = im_.data();
    double acc = 0.0;
    if (obs.kind == PauliKind::Z) {
        for (std::size_t base = 0; base < re_.size(); base += 2 * stride)
            for (std::size_t j = base; j < base + stride; ++j) {
                acc += re[j] * re[j] + im[j] * im[j];
                acc -= re[j + stride] * re[j + stride] + im[j + stride] * im[j + stride];
            }
    } else { // PauliKind::X; <X> = 2 Re(conj(a0) a1) per pair
        for (std::size_t base = 0; base < re_.size(); base += 2 * stride)
            for (std::size_t j = base; j < base + stride; ++j)
                acc += 2.0 * (re[j] * re[j + stride] + im[j] * im[j + stride]);
    }
    return acc;
}

double StateVector::norm_sq() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < re_.size(); ++i) acc += re_[i] * re_[i] + im_[i] * im_[i];
    return acc;
}

std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size())
        throw ShapeError("inner product: state dimensions differ");
    const auto are = a.reals(), aim = a.imags(), bre = b.reals(), bim = b.imags();
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < are.size(); ++i) {
        re += are[i] * bre[i] + aim[i] * bim[i];
        im += are[i] * bim[i] - aim[i] * bre[i];
    }
    return {re, im};
}

double im_inner_pauli(const StateVector& lambda, const StateVector& psi,
                      PauliKind kind, int qubit) {
    if (lambda.size() != psi.size())
        throw ShapeError("im_inner_pauli: state dimensions differ");
    const std::size_t stride = std::size_t{1} << (qubit - 1);
    const auto lre = lambda.reals(), lim = lambda.imags();
    const auto pre = psi.reals(), pim = psi.imags();
    double acc = 0.0;
    switch (kind) {
    case PauliKind::X:
        // Im(conj(l0) p1 + conj(l1) p0)
        for (std::size_t base = 0; base < lre.size(); base += 2 * stride)
            for (std::size_t j = base; j < base + stride; ++j) {
                const std::size_t k = j + stride;
                acc += lre[j] * pim[k] - lim[j] * pre[k];
                acc += lre[k] * pim[j] - lim[k] * pre[j];
            }
        break;
    case PauliKind::Y:
        // Im(conj(l0)(-i p1) + conj(l1)(i p0)) = -Re(conj(l0) p1) + Re(conj(l1) p0)
        for (std::size_t base = 0; base < lre.size(); base += 2 * stride)
            for (std::size_t j = base; j < base + stride; ++j) {
                const std::size_t k = j + stride;
                acc -= lre[j] * pre[k] + lim[j] * pim[k];
                acc += lre[k] * pre[j] + lim[k] * pim[j];
            }
        break;
    case PauliKind::Z:
        // Im(conj(l0) p0 - conj(l1) p1)
        for (std::size_t base = 0; base < lre.size(); base += 2 * stride)
            for (std::size_t j = base; j < base + stride; ++j) {
                const std::size_t k = j + stride;
                acc += lre[j] * pim[j] - lim[j] * pre[j];
                acc -= lre[k] * pim[k] - lim[k] * pre[k];
            }
        break;
    }
    return acc;
}

} // namespace dqnn
