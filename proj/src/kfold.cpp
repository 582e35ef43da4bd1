#include "dqnn/kfold.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "dqnn/errors.hpp"
#include "dqnn/rng.hpp"

namespace dqnn {

namespace {

std::map<int, std::vector<int>> by_class_shuffled(std::span<const int> labels,
                                                  std::uint64_t seed) {
    std::map<int, std::vector<int>> classes;
    for (std::size_t i = 0; i < labels.size(); ++i)
        classes[labels[i]].push_back(static_cast<int>(i));
    for (auto& [cls, indices] : classes) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(indices);
    }
    return classes;
}

} // namespace

std::vector<Fold> kfold_split(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2)
        throw RangeError("kfold: k must be >= 2, got " + std::to_string(k));
    if (labels.size() < static_cast<std::size_t>(k))
        throw RangeError("kfold: dataset of " + std::to_string(labels.size()) +
                         " samples cannot form " + std::to_string(k) + " folds");

    std::vector<std::vector<int>> fold_members(k);
    int next_fold = 0;
    for (const auto& [cls, indices] : by_class_shuffled(labels, seed)) {
        (void)cls;
        for (int idx : indices) {
            fold_members[next_fold].push_back(idx);
            next_fold = (next_fold + 1) % k;
        }
    }

    std::vector<Fold> folds(k);
    for (int f = 0; f < k; ++f) {
        std::vector<char> in_val(labels.size(), 0);
        for (int idx : fold_members[f]) in_val[idx] = 1;
        for (std::size_t i = 0; i < labels.size(); ++i)
            (in_val[i] ? folds[f].val : folds[f].train).push_back(static_cast<int>(i));
    }
    return folds;
}

std::vector<int> stratified_subset(std::span<const int> labels, int n,
                                   std::uint64_t seed) {
    if (n < 1 || static_cast<std::size_t>(n) > labels.size())
        throw RangeError("stratified_subset: n = " + std::to_string(n) +
                         " outside 1.." + std::to_string(labels.size()));
    auto classes = by_class_shuffled(labels, seed);

    // Round-robin across classes keeps proportions within one sample.
    std::vector<int> picked;
    picked.reserve(n);
    std::vector<std::pair<std::size_t, const std::vector<int>*>> cursors;
    cursors.reserve(classes.size());
    for (const auto& [cls, indices] : classes) {
        (void)cls;
        cursors.emplace_back(0, &indices);
    }
    const double share = static_cast<double>(n) / static_cast<double>(labels.size());
    for (auto& [cursor, indices] : cursors) {
        const auto take = static_cast<std::size_t>(share * indices->size());
        for (; cursor < take; ++cursor) picked.push_back((*indices)[cursor]);
    }
    // Distribute the rounding remainder one sample per class in class order.
    for (std::size_t c = 0; picked.size() < static_cast<std::size_t>(n);
         c = (c + 1) % cursors.size()) {
        auto& [cursor, indices] = cursors[c];
        if (cursor < indices->size()) picked.push_back((*indices)[cursor++]);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

} // namespace dqnn
