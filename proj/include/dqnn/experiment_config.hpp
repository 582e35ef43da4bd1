#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dqnn/architecture.hpp"
#include "dqnn/dataset.hpp"

namespace dqnn {

/// One experiment, as read from a flat key = value config file. Angles are
/// radians ("pi", "pi/4", "pi/8" and plain decimals are accepted). epochs, c
/// and seed carry no defaults: every run record pins them explicitly.
struct ExperimentConfig {
    // dataset
    std::string dataset; // "semeion" | "mnist"
    std::string semeion_path;
    std::string mnist_train_images, mnist_train_labels;
    std::string mnist_test_images, mnist_test_labels;

    // preprocessing
    double max_angle = 0.0;
    Pooling pool = Pooling::None;
    double raw_max = -1.0; // -1 = auto: observed maximum of the raw data

    // model
    int n_qc = 0;
    int n_qubits = 0;
    double c = 0.0;
    FinalRingScope final_ring_scope = FinalRingScope::LastLayer;

    // training
    int epochs = 0;
    int batch_size = 0; // 0 = full batch
    std::uint64_t seed = 0;
    double lr = 0.005;
    int k_folds = 5;
    bool shuffle = true;
    int threads = 0;    // 0 = all cores
    int eval_every = 0; // 0 = final epoch only
    int train_subset = 0; // 0 = all training samples (class-stratified otherwise)

    // which required keys were actually present
    bool has_dataset = false, has_max_angle = false, has_n_qc = false,
         has_n_qubits = false, has_c = false, has_epochs = false, has_seed = false;

    /// Grid after preprocessing (16x16 or pooled 8x8 for Semeion; 28x28 MNIST).
    int grid_h() const;
    int grid_w() const;
    int features_per_shard() const;
};

/// Parses the file, aggregating every syntax/typing problem into one
/// ConfigError so a broken file reports all its faults at once.
ExperimentConfig parse_config_file(const std::string& path);

/// Same aggregation for semantic validation; empty result = valid.
std::vector<std::string> validate(const ExperimentConfig& config);

/// Throws ConfigError listing every problem unless validate() is clean.
void validate_or_throw(const ExperimentConfig& config);

} // namespace dqnn
