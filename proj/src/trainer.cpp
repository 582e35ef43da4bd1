#include "dqnn/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dqnn/parallel.hpp"
#include "dqnn/rng.hpp"

namespace dqnn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int argmax(std::span<const double> values) {
    int best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = static_cast<int>(i);
    return best;
}

void check_data(const EnsembleModel& model, const Dataset& data,
                std::span<const int> indices, const char* what) {
    if (indices.empty())
        throw Error(std::string(what) + ": empty dataset");
    if (data.height != model.partition.grid_h || data.width != model.partition.grid_w)
        throw ShapeError(std::string(what) + ": dataset grids are " +
                         std::to_string(data.height) + "x" + std::to_string(data.width) +
                         " but the model partitions " +
                         std::to_string(model.partition.grid_h) + "x" +
                         std::to_string(model.partition.grid_w));
}

// Per-chunk partial results; reduced in chunk order by the caller.
struct ChunkPartial {
    std::vector<std::vector<double>> grad_sums; // per shard
    double loss_sum = 0.0;
    int correct = 0;
};

} // namespace

void init_params(EnsembleModel& model, std::uint64_t seed) {
    Rng rng(seed);
    for (auto& params : model.shard_params)
        for (double& p : params) p = rng.uniform(0.0, std::numbers::pi);
}

std::vector<EpochRecord> train_model(EnsembleModel& model, const Dataset& data,
                                     std::span<const int> train_indices,
                                     const Dataset* eval_data,
                                     std::span<const int> eval_indices,
                                     const TrainOptions& options,
                                     const EpochSink& sink) {
    model.validate();
    check_data(model, data, train_indices, "train");
    if (options.epochs < 1)
        throw ConfigError("train: epochs must be >= 1");
    if (options.batch_size < 0)
        throw ConfigError("train: batch_size must be positive or 0 (full batch)");

    const std::size_t n_train = train_indices.size();
    const std::size_t batch =
        options.batch_size == 0 ? n_train
                                : std::min<std::size_t>(options.batch_size, n_train);

    AdamState adam(model.total_params(), AdamConfig{.lr = options.lr});
    Rng shuffle_rng(derive_seed(options.seed, /*stream=*/1));

    std::vector<int> order(train_indices.begin(), train_indices.end());
    std::vector<EpochRecord> records;

    // Holds each in-flight chunk's partial sums; slots are written by exactly
    // one worker and reduced sequentially afterwards.
    std::vector<ChunkPartial> partials;

    for (int epoch = 1; epoch <= options.epochs; ++epoch) {
        const auto t0 = Clock::now();
        if (options.shuffle && batch < n_train) shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        std::size_t epoch_correct = 0;
        for (std::size_t batch_start = 0; batch_start < n_train; batch_start += batch) {
            const std::size_t batch_n = std::min(batch, n_train - batch_start);
            const std::size_t n_chunks = (batch_n + kSampleChunk - 1) / kSampleChunk;
            partials.assign(n_chunks, {});

            parallel_for_chunks(
                batch_n, options.threads, kSampleChunk,
                [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                    ChunkPartial& part = partials[chunk];
                    part.grad_sums.resize(model.n_shards());
                    for (int j = 0; j < model.n_shards(); ++j)
                        part.grad_sums[j].assign(model.shard_params[j].size(), 0.0);
                    for (std::size_t i = begin; i < end; ++i) {
                        const int idx = order[batch_start + i];
                        const auto sg = ensemble_backward(model, data.sample(idx),
                                                          data.labels[idx]);
                        part.loss_sum += sg.pred.loss;
                        part.correct +=
                            argmax(sg.pred.probs) == data.labels[idx] ? 1 : 0;
                        for (int j = 0; j < model.n_shards(); ++j) {
                            const auto& g = sg.shard_grads[j];
                            auto& acc = part.grad_sums[j];
                            for (std::size_t p = 0; p < g.size(); ++p) acc[p] += g[p];
                        }
                    }
                });

            // Ordered reduction; gradient averaged over the batch so the
            // learning rate is batch-size independent to first order.
            std::vector<GradientVector> grad(model.n_shards());
            for (int j = 0; j < model.n_shards(); ++j)
                grad[j].assign(model.shard_params[j].size(), 0.0);
            double batch_loss = 0.0;
            int batch_correct = 0;
            for (const ChunkPartial& part : partials) {
                batch_loss += part.loss_sum;
                batch_correct += part.correct;
                for (int j = 0; j < model.n_shards(); ++j)
                    for (std::size_t p = 0; p < grad[j].size(); ++p)
                        grad[j][p] += part.grad_sums[j][p];
            }
            const double inv_n = 1.0 / static_cast<double>(batch_n);
            for (auto& g : grad)
                for (double& v : g) v *= inv_n;

            adam_step(adam, model.shard_params, grad);
            epoch_loss += batch_loss;
            epoch_correct += batch_correct;
        }

        EpochRecord rec{epoch, "train", epoch_loss / static_cast<double>(n_train),
                        static_cast<double>(epoch_correct) / static_cast<double>(n_train),
                        seconds_since(t0)};
        if (sink) sink(rec);
        records.push_back(std::move(rec));

        const bool last_epoch = epoch == options.epochs;
        if (eval_data != nullptr &&
            (last_epoch || (options.eval_every > 0 && epoch % options.eval_every == 0))) {
            const auto tv = Clock::now();
            const Metrics m = evaluate(model, *eval_data, eval_indices, options.threads);
            EpochRecord vrec{epoch, "val", m.loss, m.accuracy, seconds_since(tv)};
            if (sink) sink(vrec);
            records.push_back(std::move(vrec));
        }
    }
    return records;
}

Metrics evaluate(const EnsembleModel& model, const Dataset& data,
                 std::span<const int> indices, int threads) {
    model.validate();
    check_data(model, data, indices, "evaluate");

    const std::size_t n = indices.size();
    const std::size_t n_chunks = (n + kSampleChunk - 1) / kSampleChunk;
    std::vector<double> loss_parts(n_chunks, 0.0);
    std::vector<int> correct_parts(n_chunks, 0);

    parallel_for_chunks(n, threads, kSampleChunk,
                        [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                            for (std::size_t i = begin; i < end; ++i) {
                                const int idx = indices[i];
                                const auto pred = predict(model, data.sample(idx),
                                                          data.labels[idx]);
                                loss_parts[chunk] += pred.loss;
                                correct_parts[chunk] +=
                                    argmax(pred.probs) == data.labels[idx] ? 1 : 0;
                            }
                        });

    double loss = 0.0;
    long correct = 0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        loss += loss_parts[c];
        correct += correct_parts[c];
    }
    return {static_cast<double>(correct) / static_cast<double>(n),
            loss / static_cast<double>(n)};
}

Metrics evaluate(const EnsembleModel& model, const Dataset& data, int threads) {
    std::vector<int> indices(data.size());
    std::iota(indices.begin(), indices.end(), 0);
    return evaluate(model, data, indices, threads);
}

} // namespace dqnn
