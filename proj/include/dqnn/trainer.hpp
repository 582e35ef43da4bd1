#pragma once

#include <functional>
#include <string>

#include "dqnn/adam.hpp"
#include "dqnn/dataset.hpp"
#include "dqnn/ensemble.hpp"

namespace dqnn {

struct TrainOptions {
    int epochs = 1;
    int batch_size = 0; // 0 = full batch
    std::uint64_t seed = 0;
    double lr = 0.005;
    int threads = 0;    // 0 = all cores
    bool shuffle = true;
    int eval_every = 0; // 0 = evaluate only after the final epoch
};

struct Metrics {
    double accuracy = 0.0;
    double loss = 0.0;
};

struct EpochRecord {
    int epoch = 0;
    std::string split; // "train" or "val"
    double loss = 0.0;
    double accuracy = 0.0;
    double wall_seconds = 0.0; // not part of the deterministic record
};

using EpochSink = std::function<void(const EpochRecord&)>;

/// Draws every trainable angle i.i.d. uniform from [0, pi), shard by shard
/// from one seeded stream.
void init_params(EnsembleModel& model, std::uint64_t seed);

/// Runs epochs x batches of averaged-gradient Adam updates. Per-epoch train
/// metrics come from the forward passes the backward already performs (loss
/// before each update, accumulated across the epoch). Fully deterministic per
/// seed: fixed-size sample chunks and ordered reductions make results
/// bit-identical for any thread count.
std::vector<EpochRecord> train_model(EnsembleModel& model, const Dataset& data,
                                     std::span<const int> train_indices,
                                     const Dataset* eval_data,
                                     std::span<const int> eval_indices,
                                     const TrainOptions& options,
                                     const EpochSink& sink = {});

/// accuracy = mean(argmax probs == label), loss = mean cross-entropy.
Metrics evaluate(const EnsembleModel& model, const Dataset& data,
                 std::span<const int> indices, int threads = 0);

/// Convenience: all samples.
Metrics evaluate(const EnsembleModel& model, const Dataset& data, int threads = 0);

} // namespace dqnn
