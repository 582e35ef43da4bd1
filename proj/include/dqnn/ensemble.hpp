#pragma once

#include "dqnn/architecture.hpp"
#include "dqnn/gradients.hpp"
#include "dqnn/partition.hpp"

namespace dqnn {

/// The ensemble rule: logits[k] = c * sum_j <O_k>_j over independent shards,
/// each shard encoding one contiguous feature partition.
struct EnsembleModel {
    PartitionSpec partition;
    std::vector<QnnArchitecture> shard_archs;
    std::vector<std::vector<double>> shard_params;
    std::vector<Observable> observables;
    double output_scale = 1.0; // c

    int n_shards() const { return static_cast<int>(shard_archs.size()); }
    int d_out() const { return static_cast<int>(observables.size()); }
    std::size_t total_params() const;

    /// Cross-field consistency; throws ConfigError/ShapeError on violation.
    void validate() const;
};

/// Assembles an all-zero-parameter model for the given grid and shard count.
EnsembleModel make_ensemble(int n_qc, int n_qubits, int grid_h, int grid_w, double c,
                            std::vector<Observable> observables = default_observables(),
                            FinalRingScope scope = FinalRingScope::LastLayer);

struct Prediction {
    std::vector<double> logits;
    std::vector<double> probs;
    double loss = 0.0; // filled when a label was supplied
};

std::vector<double> ensemble_forward(const EnsembleModel& model,
                                     std::span<const double> sample);

/// Numerically stable (max-subtracted) softmax.
std::vector<double> softmax(std::span<const double> logits);

/// -ln(probs[label]).
double cross_entropy(std::span<const double> probs, int label);

Prediction predict(const EnsembleModel& model, std::span<const double> sample);
Prediction predict(const EnsembleModel& model, std::span<const double> sample, int label);

struct SampleGradients {
    Prediction pred;
    std::vector<GradientVector> shard_grads; // d(loss)/d(theta), one per shard
};

/// Loss gradient for one labeled sample: chain rule through cross-entropy and
/// softmax gives dL/dlogit_k = p_k - 1{k==label}; scaled by c these weight a
/// single adjoint sweep per shard.
SampleGradients ensemble_backward(const EnsembleModel& model,
                                  std::span<const double> sample, int label);

} // namespace dqnn
