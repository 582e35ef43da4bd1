#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "dqnn/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCheckFailed = 3;

std::string default_out_dir(const std::string& verb, const std::string& config_path) {
    return (std::filesystem::path("runs") /
            (verb + "_" + std::filesystem::path(config_path).stem().string()))
        .string();
}

dqnn::ExperimentConfig load_config(const std::string& path, bool has_seed,
                                   std::uint64_t seed, int threads) {
    dqnn::ExperimentConfig cfg = dqnn::parse_config_file(path);
    if (has_seed) {
        cfg.seed = seed;
        cfg.has_seed = true;
    }
    if (threads >= 0) cfg.threads = threads;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed QNN statevector training engine"};
    app.require_subcommand(1);

    std::string config_path, out_dir, checkpoint_path;
    std::uint64_t seed_override = 0;
    int threads_override = -1;
    bool has_seed_override = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "experiment config file");
        if (needs_config) opt->required()->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed_override, "override the config seed")
            ->each([&](const std::string&) { has_seed_override = true; });
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--threads", threads_override, "override worker thread count");
    };

    auto* train = app.add_subcommand("train", "train a model and write a checkpoint");
    add_common(train, true);
    auto* crossval =
        app.add_subcommand("crossval", "k-fold cross-validation with aggregate metrics");
    add_common(crossval, true);
    auto* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint on a dataset");
    add_common(evaluate, true);
    evaluate->add_option("--checkpoint", checkpoint_path, "checkpoint to evaluate")
        ->required()
        ->check(CLI::ExistingFile);

    auto* gradcheck = app.add_subcommand(
        "gradcheck", "compare adjoint, parameter-shift and finite-difference engines");
    int gc_trials = 50;
    double gc_tolerance = 1e-10, gc_fd_tolerance = 1e-4;
    std::uint64_t gc_seed = 7;
    gradcheck->add_option("--trials", gc_trials, "random instances to compare");
    gradcheck->add_option("--tolerance", gc_tolerance,
                          "max allowed adjoint-vs-shift deviation");
    gradcheck->add_option("--fd-tolerance", gc_fd_tolerance,
                          "max allowed deviation vs finite differences");
    gradcheck->add_option("--seed", gc_seed, "instance generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gradcheck->parsed()) {
            const auto result = dqnn::run_gradcheck(gc_trials, gc_tolerance,
                                                    gc_fd_tolerance, gc_seed, std::cout);
            return result.pass ? kExitOk : kExitCheckFailed;
        }

        const std::string verb = app.get_subcommands().front()->get_name();
        if (out_dir.empty()) out_dir = default_out_dir(verb, config_path);
        const dqnn::ExperimentConfig cfg =
            load_config(config_path, has_seed_override, seed_override, threads_override);

        if (train->parsed()) {
            dqnn::run_train(cfg, out_dir, std::cout);
        } else if (crossval->parsed()) {
            dqnn::run_crossval(cfg, out_dir, std::cout);
        } else if (evaluate->parsed()) {
            dqnn::run_evaluate(checkpoint_path, cfg, out_dir, std::cout);
        }
        return kExitOk;
    } catch (const dqnn::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
