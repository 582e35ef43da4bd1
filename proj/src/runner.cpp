#include "dqnn/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "dqnn/gradients.hpp"
#include "dqnn/kfold.hpp"
#include "dqnn/parallel.hpp"
#include "dqnn/rng.hpp"

namespace dqnn {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Seed stream salts. Every derived stream gets its own salt so runs can be
// reconstructed from the master seed alone.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kSubsetStream = 2;
constexpr std::uint64_t kFoldStreamBase = 1000;

double population_stddev(std::span<const double> xs, double mean) {
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

nlohmann::json config_json(const ExperimentConfig& cfg, double resolved_raw_max) {
    return {
        {"dataset", cfg.dataset},
        {"semeion_path", cfg.semeion_path},
        {"mnist_train_images", cfg.mnist_train_images},
        {"mnist_train_labels", cfg.mnist_train_labels},
        {"mnist_test_images", cfg.mnist_test_images},
        {"mnist_test_labels", cfg.mnist_test_labels},
        {"max_angle", cfg.max_angle},
        {"pool", cfg.pool == Pooling::Avg2x2 ? "avg2x2" : "none"},
        {"raw_max", cfg.raw_max},
        {"resolved_raw_max", resolved_raw_max},
        {"n_qc", cfg.n_qc},
        {"n_qubits", cfg.n_qubits},
        {"c", cfg.c},
        {"final_ring_scope",
         cfg.final_ring_scope == FinalRingScope::LastLayer ? "last_layer" : "last_block"},
        {"epochs", cfg.epochs},
        {"batch_size", cfg.batch_size},
        {"seed", cfg.seed},
        {"lr", cfg.lr},
        {"k_folds", cfg.k_folds},
        {"shuffle", cfg.shuffle},
        {"threads", cfg.threads},
        {"eval_every", cfg.eval_every},
        {"train_subset", cfg.train_subset},
    };
}

void write_manifest(const fs::path& out_dir, const char* verb,
                    const ExperimentConfig& cfg, double resolved_raw_max,
                    double wall_seconds) {
    nlohmann::json j;
    j["verb"] = verb;
    j["version"] = kVersionString;
    j["config"] = config_json(cfg, resolved_raw_max);
    j["threads_resolved"] = resolve_threads(cfg.threads);
    j["wall_seconds"] = wall_seconds;
    open_out(out_dir / "manifest.json") << j.dump(1) << '\n';
}

EnsembleModel model_from_config(const ExperimentConfig& cfg) {
    return make_ensemble(cfg.n_qc, cfg.n_qubits, cfg.grid_h(), cfg.grid_w(), cfg.c,
                         default_observables(), cfg.final_ring_scope);
}

TrainOptions options_from_config(const ExperimentConfig& cfg, std::uint64_t seed) {
    TrainOptions opt;
    opt.epochs = cfg.epochs;
    opt.batch_size = cfg.batch_size;
    opt.seed = seed;
    opt.lr = cfg.lr;
    opt.threads = cfg.threads;
    opt.shuffle = cfg.shuffle;
    opt.eval_every = cfg.eval_every;
    return opt;
}

std::vector<int> all_indices(const Dataset& data) {
    std::vector<int> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

struct MetricsWriter {
    std::ofstream metrics, timing;
    bool with_fold;

    MetricsWriter(const fs::path& dir, const std::string& stem, bool fold_column)
        : metrics(open_out(dir / (stem + "_metrics.csv"))),
          timing(open_out(dir / (stem + "_timing.csv"))), with_fold(fold_column) {
        metrics << (with_fold ? "fold,epoch,split,loss,accuracy\n"
                              : "epoch,split,loss,accuracy\n");
        timing << (with_fold ? "fold,epoch,split,wall_seconds\n"
                             : "epoch,split,wall_seconds\n");
    }

    void record(int fold, const EpochRecord& rec) {
        if (with_fold) metrics << fold << ',';
        metrics << rec.epoch << ',' << rec.split << ',' << format_metric(rec.loss) << ','
                << format_metric(rec.accuracy) << '\n';
        if (with_fold) timing << fold << ',';
        timing << rec.epoch << ',' << rec.split << ',' << rec.wall_seconds << '\n';
        metrics.flush(); // long runs are monitored by tailing these files
        timing.flush();
    }
};

} // namespace

std::string format_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

LoadedData load_experiment_data(const ExperimentConfig& cfg) {
    LoadedData out;
    if (cfg.dataset == "semeion") {
        Dataset raw = load_semeion(cfg.semeion_path);
        out.resolved_raw_max = cfg.raw_max > 0.0 ? cfg.raw_max : raw.max_value();
        out.train = preprocess(raw, {cfg.max_angle, cfg.pool, out.resolved_raw_max});
    } else if (cfg.dataset == "mnist") {
        Dataset raw_train = load_mnist_idx(cfg.mnist_train_images, cfg.mnist_train_labels);
        Dataset raw_test = load_mnist_idx(cfg.mnist_test_images, cfg.mnist_test_labels);
        out.resolved_raw_max = cfg.raw_max > 0.0 ? cfg.raw_max : raw_train.max_value();
        const PreprocSpec spec{cfg.max_angle, cfg.pool, out.resolved_raw_max};
        out.train = preprocess(raw_train, spec);
        out.test = preprocess(raw_test, spec);
    } else {
        throw ConfigError("load: unknown dataset '" + cfg.dataset + "'");
    }
    return out;
}

TrainRunResult run_train(const ExperimentConfig& cfg, const std::string& out_dir,
                         std::ostream& log) {
    validate_or_throw(cfg);
    const auto t0 = Clock::now();
    fs::create_directories(out_dir);
    LoadedData data = load_experiment_data(cfg);

    EnsembleModel model = model_from_config(cfg);
    const std::uint64_t init_seed = derive_seed(cfg.seed, kInitStream);
    init_params(model, init_seed);

    std::vector<int> train_idx = all_indices(data.train);
    if (cfg.train_subset > 0)
        train_idx = stratified_subset(data.train.labels, cfg.train_subset,
                                      derive_seed(cfg.seed, kSubsetStream));

    const Dataset* eval_data = data.test ? &*data.test : nullptr;
    std::vector<int> eval_idx = eval_data ? all_indices(*eval_data) : std::vector<int>{};

    MetricsWriter writer(out_dir, "train", /*fold_column=*/false);
    auto sink = [&](const EpochRecord& rec) {
        writer.record(0, rec);
        log << "epoch " << rec.epoch << " [" << rec.split << "] loss " << rec.loss
            << " acc " << rec.accuracy << " (" << rec.wall_seconds << "s)" << std::endl;
    };
    train_model(model, data.train, train_idx, eval_data, eval_idx,
                options_from_config(cfg, cfg.seed), sink);

    TrainRunResult result;
    result.final_eval_split = eval_data ? "test" : "train";
    result.final_eval = eval_data ? evaluate(model, *eval_data, eval_idx, cfg.threads)
                                  : evaluate(model, data.train, train_idx, cfg.threads);

    result.checkpoint_path = (fs::path(out_dir) / "checkpoint.json").string();
    save_checkpoint(model, {cfg.seed, init_seed, -1}, result.checkpoint_path);

    auto summary = open_out(fs::path(out_dir) / "summary.csv");
    summary << "split,loss,accuracy\n"
            << result.final_eval_split << ',' << format_metric(result.final_eval.loss)
            << ',' << format_metric(result.final_eval.accuracy) << '\n';

    write_manifest(out_dir, "train", cfg, data.resolved_raw_max,
                   std::chrono::duration<double>(Clock::now() - t0).count());
    log << "final [" << result.final_eval_split << "] loss " << result.final_eval.loss
        << " acc " << result.final_eval.accuracy << '\n';
    return result;
}

CrossvalResult run_crossval(const ExperimentConfig& cfg, const std::string& out_dir,
                            std::ostream& log) {
    validate_or_throw(cfg);
    const auto t0 = Clock::now();
    fs::create_directories(out_dir);
    LoadedData data = load_experiment_data(cfg);

    const auto folds = kfold_split(data.train.labels, cfg.k_folds, cfg.seed);
    MetricsWriter writer(out_dir, "crossval", /*fold_column=*/true);

    CrossvalResult result;
    std::vector<double> accs, losses;
    for (int f = 0; f < cfg.k_folds; ++f) {
        const std::uint64_t fold_seed = derive_seed(cfg.seed, kFoldStreamBase + f);
        const std::uint64_t init_seed = derive_seed(fold_seed, kInitStream);
        EnsembleModel model = model_from_config(cfg);
        init_params(model, init_seed);

        auto sink = [&](const EpochRecord& rec) {
            writer.record(f + 1, rec);
            if (rec.split == "val" || rec.epoch % 25 == 0 || rec.epoch == 1)
                log << "fold " << f + 1 << " epoch " << rec.epoch << " [" << rec.split
                    << "] loss " << rec.loss << " acc " << rec.accuracy << " ("
                    << rec.wall_seconds << "s)" << std::endl;
        };
        train_model(model, data.train, folds[f].train, &data.train, folds[f].val,
                    options_from_config(cfg, fold_seed), sink);

        const Metrics val = evaluate(model, data.train, folds[f].val, cfg.threads);
        result.folds.push_back({f + 1, val});
        accs.push_back(val.accuracy);
        losses.push_back(val.loss);
        save_checkpoint(
            model, {cfg.seed, init_seed, f + 1},
            (fs::path(out_dir) / ("fold" + std::to_string(f + 1) + "_checkpoint.json"))
                .string());
        log << "fold " << f + 1 << " done: val loss " << val.loss << " val acc "
            << val.accuracy << '\n';
    }

    result.accuracy_mean =
        std::accumulate(accs.begin(), accs.end(), 0.0) / static_cast<double>(accs.size());
    result.loss_mean = std::accumulate(losses.begin(), losses.end(), 0.0) /
                       static_cast<double>(losses.size());
    result.accuracy_stddev = population_stddev(accs, result.accuracy_mean);
    result.loss_stddev = population_stddev(losses, result.loss_mean);

    auto summary = open_out(fs::path(out_dir) / "crossval_summary.csv");
    summary << "fold,val_accuracy,val_loss\n";
    for (const FoldMetrics& fm : result.folds)
        summary << fm.fold << ',' << format_metric(fm.val.accuracy) << ','
                << format_metric(fm.val.loss) << '\n';
    summary << "mean," << format_metric(result.accuracy_mean) << ','
            << format_metric(result.loss_mean) << '\n';
    summary << "stddev," << format_metric(result.accuracy_stddev) << ','
            << format_metric(result.loss_stddev) << '\n';

    write_manifest(out_dir, "crossval", cfg, data.resolved_raw_max,
                   std::chrono::duration<double>(Clock::now() - t0).count());
    log << "crossval: accuracy " << result.accuracy_mean << " +- "
        << result.accuracy_stddev << ", loss " << result.loss_mean << " +- "
        << result.loss_stddev << '\n';
    return result;
}

GradcheckResult run_gradcheck(int trials, double tolerance_shift, double tolerance_fd,
                              std::uint64_t seed, std::ostream& log) {
    if (trials < 0)
        throw ConfigError("gradcheck: trials must be >= 0");
    GradcheckResult result;
    result.trials = trials;
    if (trials == 0) {
        result.vacuous = true;
        result.pass = true;
        log << "gradcheck: WARNING: 0 trials requested, vacuous pass\n";
        return result;
    }

    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const int n_qubits = 2 + static_cast<int>(rng.below(5));  // 2..6
        const int layers = 1 + static_cast<int>(rng.below(4));    // 1..4
        const int n_encoding = 1 + static_cast<int>(rng.below(2)); // 1..2
        const int n_features = n_encoding * 2 * n_qubits;
        const auto arch = build_layered_architecture(n_qubits, n_features, layers,
                                                     FinalRingScope::LastLayer,
                                                     /*min_qubits=*/2);

        std::vector<double> params(arch.n_params), features(arch.n_features);
        for (double& p : params) p = rng.uniform(0.0, std::numbers::pi);
        for (double& x : features) x = rng.uniform(0.0, std::numbers::pi / 4.0);
        const Observable obs{rng.below(2) == 0 ? PauliKind::X : PauliKind::Z,
                             1 + static_cast<int>(rng.below(n_qubits))};

        const auto adj = adjoint_grad(arch, params, features,
                                      std::span<const Observable>(&obs, 1))[0];
        const auto shift = parameter_shift_grad(arch, params, features, obs);
        const auto fd = finite_diff_grad(arch, params, features, obs, 1e-4);
        for (int p = 0; p < arch.n_params; ++p) {
            result.max_adjoint_vs_shift =
                std::max(result.max_adjoint_vs_shift, std::abs(adj[p] - shift[p]));
            result.max_adjoint_vs_fd =
                std::max(result.max_adjoint_vs_fd, std::abs(adj[p] - fd[p]));
            result.max_shift_vs_fd =
                std::max(result.max_shift_vs_fd, std::abs(shift[p] - fd[p]));
        }
    }

    result.pass = result.max_adjoint_vs_shift <= tolerance_shift &&
                  result.max_adjoint_vs_fd <= tolerance_fd &&
                  result.max_shift_vs_fd <= tolerance_fd;
    log << "gradcheck over " << trials << " random instances:\n"
        << "  adjoint vs parameter-shift max |dev| = " << result.max_adjoint_vs_shift
        << " (tolerance " << tolerance_shift << ")\n"
        << "  adjoint vs finite-diff     max |dev| = " << result.max_adjoint_vs_fd
        << " (tolerance " << tolerance_fd << ")\n"
        << "  shift   vs finite-diff     max |dev| = " << result.max_shift_vs_fd
        << " (tolerance " << tolerance_fd << ")\n"
        << (result.pass ? "gradcheck: PASS\n" : "gradcheck: FAIL\n");
    return result;
}

Metrics run_evaluate(const std::string& checkpoint_path, const ExperimentConfig& cfg,
                     const std::string& out_dir, std::ostream& log) {
    validate_or_throw(cfg);
    fs::create_directories(out_dir);
    LoadedCheckpoint loaded = load_checkpoint(checkpoint_path);
    LoadedData data = load_experiment_data(cfg);

    // Mirrors run_train's final evaluation split exactly (including any
    // stratified training subset) so that re-evaluating a training checkpoint
    // reproduces the logged metrics bit for bit.
    const Dataset& eval_data = data.test ? *data.test : data.train;
    const char* split = data.test ? "test" : "train";
    std::vector<int> eval_idx = all_indices(eval_data);
    if (!data.test && cfg.train_subset > 0)
        eval_idx = stratified_subset(data.train.labels, cfg.train_subset,
                                     derive_seed(cfg.seed, kSubsetStream));
    const Metrics m = evaluate(loaded.model, eval_data, eval_idx, cfg.threads);

    auto out = open_out(fs::path(out_dir) / "evaluation.csv");
    out << "split,loss,accuracy\n"
        << split << ',' << format_metric(m.loss) << ',' << format_metric(m.accuracy)
        << '\n';
    log << "evaluate [" << split << "] loss " << m.loss << " acc " << m.accuracy << '\n';
    return m;
}

} // namespace dqnn
