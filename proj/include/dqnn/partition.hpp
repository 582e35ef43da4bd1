#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dqnn/errors.hpp"

namespace dqnn {

/// Contiguous-row split of an H x W grid across n_qc shards.
struct PartitionSpec {
    int grid_h = 0, grid_w = 0, n_qc = 0;
    std::vector<std::pair<int, int>> row_ranges; // [start, end) 0-based rows

    /// Even row partition; grid_h must divide by n_qc.
    static PartitionSpec rows(int grid_h, int grid_w, int n_qc);

    int features_per_shard() const { return (grid_h / n_qc) * grid_w; }
};

/// Slices a flattened row-major sample into per-shard feature vectors.
/// Concatenating the slices in shard order reconstructs the sample.
std::vector<std::vector<double>> partition_features(std::span<const double> sample,
                                                    const PartitionSpec& spec);

} // namespace dqnn
