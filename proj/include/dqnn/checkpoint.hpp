#pragma once

#include <cstdint>
#include <string>

#include "dqnn/ensemble.hpp"

namespace dqnn {

/// Seed lineage recorded next to the parameters so a run can be re-derived.
struct CheckpointMeta {
    std::uint64_t seed = 0;
    std::uint64_t init_seed = 0; // the stream that actually drew the parameters
    int fold = -1;               // -1 = not a cross-validation fold
};

/// JSON container, format tag "dqnn-checkpoint" version 1. Doubles survive a
/// save/load round trip bit-exactly (shortest round-trip serialization).
void save_checkpoint(const EnsembleModel& model, const CheckpointMeta& meta,
                     const std::string& path);

struct LoadedCheckpoint {
    EnsembleModel model;
    CheckpointMeta meta;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

} // namespace dqnn
