#pragma once

#include <iosfwd>
#include <optional>

#include "dqnn/checkpoint.hpp"
#include "dqnn/experiment_config.hpp"
#include "dqnn/trainer.hpp"

namespace dqnn {

inline constexpr const char* kVersionString = "1.0.0";

/// Preprocessed experiment data. `resolved_raw_max` is the normalization
/// denominator after 'auto' resolution (observed maximum of the raw training
/// data).
struct LoadedData {
    Dataset train;
    std::optional<Dataset> test;
    double resolved_raw_max = 0.0;
};

LoadedData load_experiment_data(const ExperimentConfig& config);

struct TrainRunResult {
    Metrics final_eval;           // on the test set (mnist) or training set (semeion)
    std::string final_eval_split; // "test" or "train"
    std::string checkpoint_path;
};

TrainRunResult run_train(const ExperimentConfig& config, const std::string& out_dir,
                         std::ostream& log);

struct FoldMetrics {
    int fold = 0; // 1-based
    Metrics val;
};

struct CrossvalResult {
    std::vector<FoldMetrics> folds;
    double accuracy_mean = 0.0, accuracy_stddev = 0.0;
    double loss_mean = 0.0, loss_stddev = 0.0;
};

CrossvalResult run_crossval(const ExperimentConfig& config, const std::string& out_dir,
                            std::ostream& log);

struct GradcheckResult {
    int trials = 0;
    double max_adjoint_vs_shift = 0.0;
    double max_adjoint_vs_fd = 0.0;
    double max_shift_vs_fd = 0.0;
    bool vacuous = false; // no trials ran
    bool pass = false;
};

/// Compares the three gradient engines on random small shard instances
/// (<= 6 qubits). `tolerance_shift` bounds adjoint-vs-parameter-shift,
/// `tolerance_fd` bounds either engine vs central finite differences (h=1e-4).
GradcheckResult run_gradcheck(int trials, double tolerance_shift, double tolerance_fd,
                              std::uint64_t seed, std::ostream& log);

/// Loads a checkpoint and evaluates it on the config's dataset (the test set
/// for mnist, the whole set for semeion).
Metrics run_evaluate(const std::string& checkpoint_path, const ExperimentConfig& config,
                     const std::string& out_dir, std::ostream& log);

/// %.17g — round-trips doubles exactly; the formatting used in every metrics
/// file so that same-seed runs are byte-identical.
std::string format_metric(double v);

} // namespace dqnn
