#include "dqnn/experiment_config.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dqnn {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& s, double& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_angle(const std::string& s, double& out) {
    if (s == "pi") {
        out = std::numbers::pi;
        return true;
    }
    if (s.rfind("pi/", 0) == 0) {
        double denom = 0.0;
        if (!parse_double(s.substr(3), denom) || denom == 0.0) return false;
        out = std::numbers::pi / denom;
        return true;
    }
    return parse_double(s, out);
}

bool parse_int(const std::string& s, int& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_bool(const std::string& s, bool& out) {
    if (s == "true" || s == "1") {
        out = true;
        return true;
    }
    if (s == "false" || s == "0") {
        out = false;
        return true;
    }
    return false;
}

} // namespace

int ExperimentConfig::grid_h() const {
    const int raw = dataset == "mnist" ? 28 : 16;
    return pool == Pooling::Avg2x2 ? raw / 2 : raw;
}

int ExperimentConfig::grid_w() const { return grid_h(); }

int ExperimentConfig::features_per_shard() const {
    return n_qc > 0 && grid_h() % n_qc == 0 ? (grid_h() / n_qc) * grid_w() : 0;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");

    ExperimentConfig cfg;
    std::vector<std::string> problems;
    std::string line;
    std::size_t line_no = 0;

    auto complain = [&](const std::string& what) {
        problems.push_back(path + ":" + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;

        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            complain("expected 'key = value', got '" + stripped + "'");
            continue;
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            complain("empty key or value");
            continue;
        }

        if (key == "dataset") {
            if (value != "semeion" && value != "mnist")
                complain("dataset must be 'semeion' or 'mnist', got '" + value + "'");
            cfg.dataset = value;
            cfg.has_dataset = true;
        } else if (key == "semeion_path") {
            cfg.semeion_path = value;
        } else if (key == "mnist_train_images") {
            cfg.mnist_train_images = value;
        } else if (key == "mnist_train_labels") {
            cfg.mnist_train_labels = value;
        } else if (key == "mnist_test_images") {
            cfg.mnist_test_images = value;
        } else if (key == "mnist_test_labels") {
            cfg.mnist_test_labels = value;
        } else if (key == "max_angle") {
            if (!parse_angle(value, cfg.max_angle))
                complain("max_angle: expected radians ('pi', 'pi/N' or decimal), got '" +
                         value + "'");
            else
                cfg.has_max_angle = true;
        } else if (key == "pool") {
            if (value == "none")
                cfg.pool = Pooling::None;
            else if (value == "avg2x2")
                cfg.pool = Pooling::Avg2x2;
            else
                complain("pool must be 'none' or 'avg2x2', got '" + value + "'");
        } else if (key == "raw_max") {
            if (value == "auto")
                cfg.raw_max = -1.0;
            else if (!parse_double(value, cfg.raw_max) || cfg.raw_max <= 0.0)
                complain("raw_max must be 'auto' or a positive number, got '" + value +
                         "'");
        } else if (key == "n_qc") {
            if (!parse_int(value, cfg.n_qc))
                complain("n_qc: not an integer");
            else
                cfg.has_n_qc = true;
        } else if (key == "n_qubits") {
            if (!parse_int(value, cfg.n_qubits))
                complain("n_qubits: not an integer");
            else
                cfg.has_n_qubits = true;
        } else if (key == "c") {
            if (!parse_double(value, cfg.c))
                complain("c: not a number");
            else
                cfg.has_c = true;
        } else if (key == "final_ring_scope") {
            if (value == "last_layer")
                cfg.final_ring_scope = FinalRingScope::LastLayer;
            else if (value == "last_block")
                cfg.final_ring_scope = FinalRingScope::LastBlock;
            else
                complain("final_ring_scope must be 'last_layer' or 'last_block'");
        } else if (key == "epochs") {
            if (!parse_int(value, cfg.epochs))
                complain("epochs: not an integer");
            else
                cfg.has_epochs = true;
        } else if (key == "batch_size") {
            if (value == "full")
                cfg.batch_size = 0;
            else if (!parse_int(value, cfg.batch_size) || cfg.batch_size < 1)
                complain("batch_size must be 'full' or a positive integer");
        } else if (key == "seed") {
            if (!parse_u64(value, cfg.seed))
                complain("seed: not an unsigned integer");
            else
                cfg.has_seed = true;
        } else if (key == "lr") {
            if (!parse_double(value, cfg.lr) || cfg.lr <= 0.0)
                complain("lr must be a positive number");
        } else if (key == "k_folds") {
            if (!parse_int(value, cfg.k_folds))
                complain("k_folds: not an integer");
        } else if (key == "shuffle") {
            if (!parse_bool(value, cfg.shuffle))
                complain("shuffle must be true or false");
        } else if (key == "threads") {
            if (!parse_int(value, cfg.threads) || cfg.threads < 0)
                complain("threads must be >= 0 (0 = all cores)");
        } else if (key == "eval_every") {
            if (!parse_int(value, cfg.eval_every) || cfg.eval_every < 0)
                complain("eval_every must be >= 0");
        } else if (key == "train_subset") {
            if (!parse_int(value, cfg.train_subset) || cfg.train_subset < 0)
                complain("train_subset must be >= 0 (0 = all samples)");
        } else {
            complain("unknown key '" + key + "'");
        }
    }

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "config: " << problems.size() << " problem(s):";
        for (const auto& p : problems) msg << "\n  " << p;
        throw ConfigError(msg.str());
    }
    return cfg;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
    std::vector<std::string> problems;
    auto require = [&](bool present, const char* key) {
        if (!present) problems.push_back(std::string("missing required key '") + key + "'");
    };
    require(cfg.has_dataset, "dataset");
    require(cfg.has_max_angle, "max_angle");
    require(cfg.has_n_qc, "n_qc");
    require(cfg.has_n_qubits, "n_qubits");
    require(cfg.has_c, "c");
    require(cfg.has_epochs, "epochs");
    require(cfg.has_seed, "seed");
    if (!problems.empty()) return problems; // nothing below is meaningful yet

    if (cfg.dataset == "semeion" && cfg.semeion_path.empty())
        problems.push_back("semeion runs need semeion_path");
    if (cfg.dataset == "mnist") {
        if (cfg.mnist_train_images.empty() || cfg.mnist_train_labels.empty())
            problems.push_back("mnist runs need mnist_train_images and mnist_train_labels");
        if (cfg.mnist_test_images.empty() || cfg.mnist_test_labels.empty())
            problems.push_back("mnist runs need mnist_test_images and mnist_test_labels");
        if (cfg.pool == Pooling::Avg2x2)
            problems.push_back("mnist runs do not pool (28x28 grids are encoded as-is)");
    }
    if (!(cfg.max_angle > 0.0))
        problems.push_back("max_angle must be positive");
    if (cfg.epochs < 1) problems.push_back("epochs must be >= 1");
    if (cfg.n_qc < 1) problems.push_back("n_qc must be >= 1");
    if (cfg.n_qubits < 5)
        problems.push_back("n_qubits must be >= 5 (observables reach qubit 5)");
    if (cfg.k_folds < 2) problems.push_back("k_folds must be >= 2");

    const int h = cfg.grid_h();
    if (cfg.n_qc >= 1 && h % cfg.n_qc != 0)
        problems.push_back("grid height " + std::to_string(h) +
                           " is not divisible by n_qc = " + std::to_string(cfg.n_qc));
    else if (cfg.n_qc >= 1 && cfg.n_qubits >= 1) {
        const int feats = cfg.features_per_shard();
        if (feats % (2 * cfg.n_qubits) != 0)
            problems.push_back("features per shard " + std::to_string(feats) +
                               " is not a multiple of 2*n_qubits = " +
                               std::to_string(2 * cfg.n_qubits));
    }
    return problems;
}

void validate_or_throw(const ExperimentConfig& cfg) {
    const auto problems = validate(cfg);
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "config: " << problems.size() << " problem(s):";
    for (const auto& p : problems) msg << "\n  " << p;
    throw ConfigError(msg.str());
}

} // namespace dqnn
