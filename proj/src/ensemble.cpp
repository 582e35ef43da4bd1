#include "dqnn/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dqnn {

PartitionSpec PartitionSpec::rows(int grid_h, int grid_w, int n_qc) {
    if (grid_h < 1 || grid_w < 1)
        throw ConfigError("partition: grid dimensions must be positive");
    if (n_qc < 1)
        throw ConfigError("partition: shard count must be >= 1");
    if (grid_h % n_qc != 0)
        throw ConfigError("partition: grid height " + std::to_string(grid_h) +
                          " is not divisible by n_qc = " + std::to_string(n_qc));
    PartitionSpec spec{grid_h, grid_w, n_qc, {}};
    const int rows_per_shard = grid_h / n_qc;
    for (int j = 0; j < n_qc; ++j)
        spec.row_ranges.emplace_back(j * rows_per_shard, (j + 1) * rows_per_shard);
    return spec;
}

std::vector<std::vector<double>> partition_features(std::span<const double> sample,
                                                    const PartitionSpec& spec) {
    const std::size_t expected =
        static_cast<std::size_t>(spec.grid_h) * static_cast<std::size_t>(spec.grid_w);
    if (sample.size() != expected)
        throw ShapeError("partition: sample has " + std::to_string(sample.size()) +
                         " values, grid wants " + std::to_string(expected));
    std::vector<std::vector<double>> slices;
    slices.reserve(spec.row_ranges.size());
    for (const auto& [start, end] : spec.row_ranges) {
        const auto* begin = sample.data() + static_cast<std::size_t>(start) * spec.grid_w;
        const auto* stop = sample.data() + static_cast<std::size_t>(end) * spec.grid_w;
        slices.emplace_back(begin, stop);
    }
    return slices;
}

std::size_t EnsembleModel::total_params() const {
    std::size_t n = 0;
    for (const auto& p : shard_params) n += p.size();
    return n;
}

void EnsembleModel::validate() const {
    if (shard_archs.size() != shard_params.size() ||
        shard_archs.size() != partition.row_ranges.size())
        throw ShapeError("ensemble: shard count mismatch between partition, "
                         "architectures and parameters");
    if (observables.empty())
        throw ConfigError("ensemble: observable set is empty");
    for (std::size_t j = 0; j < shard_archs.size(); ++j) {
        const auto& arch = shard_archs[j];
        if (arch.n_features != partition.features_per_shard())
            throw ShapeError("ensemble: shard " + std::to_string(j + 1) + " consumes " +
                             std::to_string(arch.n_features) +
                             " features but its partition slice has " +
                             std::to_string(partition.features_per_shard()));
        if (shard_params[j].size() != static_cast<std::size_t>(arch.n_params))
            throw ShapeError("ensemble: shard " + std::to_string(j + 1) +
                             " parameter vector has wrong length");
        for (const Observable& obs : observables)
            if (obs.qubit > arch.n_qubits)
                throw ConfigError("ensemble: observable " + obs.name() +
                                  " out of range for a " +
                                  std::to_string(arch.n_qubits) + "-qubit shard");
    }
}

EnsembleModel make_ensemble(int n_qc, int n_qubits, int grid_h, int grid_w, double c,
                            std::vector<Observable> observables, FinalRingScope scope) {
    EnsembleModel model;
    model.partition = PartitionSpec::rows(grid_h, grid_w, n_qc);
    int min_qubits = 2;
    for (const Observable& obs : observables) min_qubits = std::max(min_qubits, obs.qubit);
    const int features = model.partition.features_per_shard();
    for (int j = 0; j < n_qc; ++j) {
        model.shard_archs.push_back(
            build_architecture(n_qubits, features, scope, min_qubits));
        model.shard_params.emplace_back(model.shard_archs.back().n_params, 0.0);
    }
    model.observables = std::move(observables);
    model.output_scale = c;
    model.validate();
    return model;
}

std::vector<double> ensemble_forward(const EnsembleModel& model,
                                     std::span<const double> sample) {
    const auto slices = partition_features(sample, model.partition);
    std::vector<double> logits(model.d_out(), 0.0);
    for (int j = 0; j < model.n_shards(); ++j) {
        const auto shard_out = shard_forward(model.shard_archs[j], model.shard_params[j],
                                             slices[j], model.observables);
        for (int k = 0; k < model.d_out(); ++k) logits[k] += shard_out[k];
    }
    for (double& v : logits) v *= model.output_scale;
    return logits;
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) throw ShapeError("softmax: empty input");
    double max_logit = logits[0];
    for (double v : logits) {
        if (!std::isfinite(v)) throw NumericError("softmax: non-finite logit");
        max_logit = std::max(max_logit, v);
    }
    std::vector<double> probs(logits.size());
    double total = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        probs[k] = std::exp(logits[k] - max_logit);
        total += probs[k];
    }
    for (double& p : probs) p /= total;
    return probs;
}

double cross_entropy(std::span<const double> probs, int label) {
    if (label < 0 || static_cast<std::size_t>(label) >= probs.size())
        throw RangeError("cross_entropy: label " + std::to_string(label) +
                         " outside 0.." + std::to_string(probs.size() - 1));
    return -std::log(probs[label]);
}

Prediction predict(const EnsembleModel& model, std::span<const double> sample) {
    Prediction pred;
    pred.logits = ensemble_forward(model, sample);
    pred.probs = softmax(pred.logits);
    return pred;
}

Prediction predict(const EnsembleModel& model, std::span<const double> sample,
                   int label) {
    Prediction pred = predict(model, sample);
    pred.loss = cross_entropy(pred.probs, label);
    return pred;
}

SampleGradients ensemble_backward(const EnsembleModel& model,
                                  std::span<const double> sample, int label) {
    const auto slices = partition_features(sample, model.partition);

    std::vector<ShardTape> tapes;
    tapes.reserve(model.n_shards());
    for (int j = 0; j < model.n_shards(); ++j)
        tapes.emplace_back(model.shard_archs[j], model.shard_params[j], slices[j],
                           model.observables);

    SampleGradients out;
    out.pred.logits.assign(model.d_out(), 0.0);
    for (const ShardTape& tape : tapes)
        for (int k = 0; k < model.d_out(); ++k)
            out.pred.logits[k] += tape.expectations()[k];
    for (double& v : out.pred.logits) v *= model.output_scale;
    out.pred.probs = softmax(out.pred.logits);
    out.pred.loss = cross_entropy(out.pred.probs, label);

    // dL/dlogit_k = p_k - 1{k==label}; logits carry the scale c, so each
    // shard's expectation gradient picks up weight c * (p_k - y_k). The same
    // weights apply to every shard because the sum over shards is unweighted.
    std::vector<double> weights(model.d_out());
    for (int k = 0; k < model.d_out(); ++k)
        weights[k] = model.output_scale * (out.pred.probs[k] - (k == label ? 1.0 : 0.0));

    out.shard_grads.reserve(model.n_shards());
    for (const ShardTape& tape : tapes)
        out.shard_grads.push_back(tape.weighted_grad(weights));
    return out;
}

} // namespace dqnn
