#include "dqnn/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

namespace dqnn {

namespace {

constexpr const char* kFormatTag = "dqnn-checkpoint";
constexpr int kVersion = 1;

std::string scope_name(FinalRingScope scope) {
    return scope == FinalRingScope::LastLayer ? "last_layer" : "last_block";
}

FinalRingScope scope_from(const std::string& name) {
    if (name == "last_layer") return FinalRingScope::LastLayer;
    if (name == "last_block") return FinalRingScope::LastBlock;
    throw FormatError("checkpoint: unknown final_ring_scope '" + name + "'");
}

Observable observable_from(const std::string& name) {
    if (name.size() < 2 || (name[0] != 'X' && name[0] != 'Z'))
        throw FormatError("checkpoint: bad observable '" + name + "'");
    const int qubit = std::stoi(name.substr(1));
    return {name[0] == 'X' ? PauliKind::X : PauliKind::Z, qubit};
}

} // namespace

void save_checkpoint(const EnsembleModel& model, const CheckpointMeta& meta,
                     const std::string& path) {
    model.validate();
    nlohmann::json j;
    j["format"] = kFormatTag;
    j["version"] = kVersion;
    j["partition"] = {{"grid_h", model.partition.grid_h},
                      {"grid_w", model.partition.grid_w},
                      {"n_qc", model.partition.n_qc}};
    auto& ranges = j["partition"]["row_ranges"] = nlohmann::json::array();
    for (const auto& [start, end] : model.partition.row_ranges)
        ranges.push_back({start, end});

    auto& shards = j["shards"] = nlohmann::json::array();
    for (int s = 0; s < model.n_shards(); ++s) {
        const auto& arch = model.shard_archs[s];
        shards.push_back({{"n_qubits", arch.n_qubits},
                          {"n_features", arch.n_features},
                          {"layers_per_block", arch.layers_per_block},
                          {"final_ring_scope", scope_name(arch.final_ring_scope)},
                          {"params", model.shard_params[s]}});
    }

    auto& obs = j["observables"] = nlohmann::json::array();
    for (const Observable& o : model.observables) obs.push_back(o.name());
    j["output_scale"] = model.output_scale;
    j["seed_lineage"] = {{"seed", meta.seed},
                         {"init_seed", meta.init_seed},
                         {"fold", meta.fold}};

    std::ofstream out(path);
    if (!out)
        throw FormatError("checkpoint: cannot open '" + path + "' for writing");
    out << j.dump(1) << '\n';
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("checkpoint: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("checkpoint: '" + path + "' is not valid JSON: " + e.what());
    }

    try {
        if (j.at("format") != kFormatTag)
            throw FormatError("checkpoint: '" + path + "' has format tag '" +
                              j.at("format").get<std::string>() + "'");
        if (j.at("version") != kVersion)
            throw FormatError("checkpoint: unsupported version " +
                              j.at("version").dump());

        LoadedCheckpoint loaded;
        EnsembleModel& model = loaded.model;
        const auto& part = j.at("partition");
        model.partition.grid_h = part.at("grid_h");
        model.partition.grid_w = part.at("grid_w");
        model.partition.n_qc = part.at("n_qc");
        for (const auto& r : part.at("row_ranges"))
            model.partition.row_ranges.emplace_back(r.at(0), r.at(1));

        for (const auto& shard : j.at("shards")) {
            model.shard_archs.push_back(build_layered_architecture(
                shard.at("n_qubits"), shard.at("n_features"),
                shard.at("layers_per_block"),
                scope_from(shard.at("final_ring_scope")), /*min_qubits=*/2));
            model.shard_params.push_back(shard.at("params").get<std::vector<double>>());
        }
        for (const auto& name : j.at("observables"))
            model.observables.push_back(observable_from(name));
        model.output_scale = j.at("output_scale");

        const auto& lineage = j.at("seed_lineage");
        loaded.meta.seed = lineage.at("seed");
        loaded.meta.init_seed = lineage.at("init_seed");
        loaded.meta.fold = lineage.at("fold");

        model.validate();
        return loaded;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("checkpoint: '" + path + "' is malformed: " +
                          std::string(e.what()));
    }
}

} // namespace dqnn
