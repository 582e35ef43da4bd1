#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dqnn/errors.hpp"

namespace dqnn {

enum class DataSource : std::uint8_t { SemeionText, MnistIdx };
enum class Pooling : std::uint8_t { None, Avg2x2 };

/// Angle-encoding preprocessing: values in [0, raw_max] map linearly onto
/// [0, max_angle] radians, then optional 2x2 average pooling.
struct PreprocSpec {
    double max_angle = 0.0; // radians
    Pooling pool = Pooling::None;
    double raw_max = 255.0;
};

/// Labeled grid samples. `values` holds size() * height * width doubles,
/// sample-major with row-major grids. `preproc` records what normalization,
/// if any, produced these values.
struct Dataset {
    int height = 0, width = 0;
    DataSource source{};
    std::vector<double> values;
    std::vector<int> labels;
    std::optional<PreprocSpec> preproc;

    std::size_t size() const { return labels.size(); }
    int sample_dim() const { return height * width; }
    std::span<const double> sample(std::size_t i) const {
        return {values.data() + i * static_cast<std::size_t>(sample_dim()),
                static_cast<std::size_t>(sample_dim())};
    }
    double max_value() const;
};

/// value -> value / raw_max * max_angle; raw values must lie in [0, raw_max].
Dataset normalize(const Dataset& data, double max_angle, double raw_max);

/// Each output cell is the mean of its 2x2 input block; H and W must be even.
Dataset avg_pool_2x2(const Dataset& data);

/// Normalization first, then pooling (the two commute for this linear map,
/// but the applied order is pinned).
Dataset preprocess(const Dataset& data, const PreprocSpec& spec);

/// Semeion text format: per line, 256 feature fields then 10 one-hot label
/// fields, whitespace-separated.
Dataset load_semeion(const std::string& path);
void write_semeion(const Dataset& data, const std::string& path);

/// Canonical IDX containers (big-endian headers; images magic 0x00000803,
/// labels magic 0x00000801). Gzip-compressed files are accepted transparently.
Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path);

} // namespace dqnn
