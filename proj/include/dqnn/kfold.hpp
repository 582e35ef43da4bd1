#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dqnn {

struct Fold {
    std::vector<int> train, val;
};

/// Stratified k-fold split. Per-class index lists are shuffled with a seeded
/// stream, then dealt round-robin with a single fold pointer running across
/// classes, so fold sizes differ by at most one globally and per class.
/// Indices inside each fold are ascending.
std::vector<Fold> kfold_split(std::span<const int> labels, int k, std::uint64_t seed);

/// Stratified subset of `n` sample indices (ascending), class proportions
/// preserved within +-1 sample.
std::vector<int> stratified_subset(std::span<const int> labels, int n,
                                   std::uint64_t seed);

} // namespace dqnn
