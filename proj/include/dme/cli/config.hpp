#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "dme/decision/rules.hpp"
#include "dme/planner/train.hpp"
#include "dme/sim/generate.hpp"

namespace dme::cli {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat dotted-key configuration ("section.key = value", '#' comments).
// Unknown keys are rejected; the full schema is printed by the
// config-schema subcommand. Client credentials never appear here: only the
// name of the environment variable that holds the token.
struct RunConfig {
    std::uint64_t seed = 7;
    std::string data_dir = "runs/desk/data";
    std::string out_dir = "runs/desk/out";

    int scenes_train = 256;
    int scenes_eval = 64;
    int max_agents = 4;
    double speed_min = 2.5;
    double speed_max = 6.0;

    int model_dim = 32;
    int num_heads = 4;
    int ffn_hidden = 64;
    int max_tokens = 128;

    int epochs = 40;
    double lr = 5e-3;
    double momentum = 0.9;
    std::string ablation = "dm_text";

    double loss_imitation = 1.0;
    double loss_collision = 0.5;
    double loss_consistency = 0.2;

    double rules_turn_deg = 15.0;
    double rules_lateral = 1.5;
    double rules_accel_ratio = 1.25;
    double rules_decel_ratio = 0.8;
    double rules_v_stop = 0.5;

    std::string client_host;
    std::string client_path = "/generate";
    std::string client_token_env = "DME_CLIENT_TOKEN";

    int jobs = 1;

    // ---- conversions into module types --------------------------------

    sim::GenConfig gen_config() const {
        sim::GenConfig g;
        g.max_agents = max_agents;
        g.speed_min = speed_min;
        g.speed_max = speed_max;
        g.thresholds = thresholds();
        return g;
    }

    decision::RuleThresholds thresholds() const {
        decision::RuleThresholds th;
        th.turn_heading = rules_turn_deg * std::numbers::pi / 180.0;
        th.lateral_lc = rules_lateral;
        th.accel_ratio = rules_accel_ratio;
        th.decel_ratio = rules_decel_ratio;
        th.v_stop = rules_v_stop;
        return th;
    }

    planner::PlannerDims dims() const {
        return {static_cast<std::size_t>(model_dim), static_cast<std::size_t>(num_heads),
                static_cast<std::size_t>(ffn_hidden), static_cast<std::size_t>(max_tokens)};
    }

    planner::LossWeights weights() const {
        return {loss_imitation, loss_collision, loss_consistency};
    }

    planner::TrainConfig train_config() const {
        planner::TrainConfig t;
        t.epochs = epochs;
        t.lr = lr;
        t.momentum = momentum;
        t.seed = seed;
        const auto mode = planner::parse_ablation(ablation);
        if (!mode) throw ConfigError("train.ablation: unknown mode '" + ablation + "'");
        t.ablation = *mode;
        t.weights = weights();
        t.thresholds = thresholds();
        t.dims = dims();
        return t;
    }
};

namespace detail {

struct KeySpec {
    std::string key;
    std::string type;
    std::string doc;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

inline std::uint64_t parse_u64(const std::string& v) { return std::stoull(v); }
inline int parse_int(const std::string& v) { return std::stoi(v); }
inline double parse_double(const std::string& v) { return std::stod(v); }

inline const std::vector<KeySpec>& key_specs() {
    auto u64_key = [](std::string key, std::string doc, std::uint64_t RunConfig::*field) {
        return KeySpec{std::move(key), "u64", std::move(doc),
                       [field](RunConfig& c, const std::string& v) { c.*field = parse_u64(v); },
                       [field](const RunConfig& c) { return std::to_string(c.*field); }};
    };
    auto int_key = [](std::string key, std::string doc, int RunConfig::*field) {
        return KeySpec{std::move(key), "int", std::move(doc),
                       [field](RunConfig& c, const std::string& v) { c.*field = parse_int(v); },
                       [field](const RunConfig& c) { return std::to_string(c.*field); }};
    };
    auto dbl_key = [](std::string key, std::string doc, double RunConfig::*field) {
        return KeySpec{std::move(key), "float", std::move(doc),
                       [field](RunConfig& c, const std::string& v) { c.*field = parse_double(v); },
                       [field](const RunConfig& c) {
                           std::ostringstream out;
                           out.precision(12);
                           out << c.*field;
                           return out.str();
                       }};
    };
    auto str_key = [](std::string key, std::string doc, std::string RunConfig::*field) {
        return KeySpec{std::move(key), "string", std::move(doc),
                       [field](RunConfig& c, const std::string& v) { c.*field = v; },
                       [field](const RunConfig& c) { return c.*field; }};
    };

    static const std::vector<KeySpec> specs = {
        u64_key("seed", "master seed for generation and training", &RunConfig::seed),
        str_key("data.dir", "dataset directory", &RunConfig::data_dir),
        str_key("out.dir", "run output directory", &RunConfig::out_dir),
        int_key("scenes.train", "training scene count", &RunConfig::scenes_train),
        int_key("scenes.eval", "held-out scene count", &RunConfig::scenes_eval),
        int_key("scenes.max_agents", "max agents per scene (0..8)", &RunConfig::max_agents),
        dbl_key("scenes.speed_min", "ego speed lower bound (m/s)", &RunConfig::speed_min),
        dbl_key("scenes.speed_max", "ego speed upper bound (m/s)", &RunConfig::speed_max),
        int_key("model.dim", "model dimension d", &RunConfig::model_dim),
        int_key("model.heads", "attention heads", &RunConfig::num_heads),
        int_key("model.ffn_hidden", "planner head hidden width", &RunConfig::ffn_hidden),
        int_key("model.max_tokens", "positional table length", &RunConfig::max_tokens),
        int_key("train.epochs", "training epochs", &RunConfig::epochs),
        dbl_key("train.lr", "SGD learning rate", &RunConfig::lr),
        dbl_key("train.momentum", "SGD momentum", &RunConfig::momentum),
        str_key("train.ablation",
                "executor_only | gt_text | dm_text | dm_text_cl", &RunConfig::ablation),
        dbl_key("loss.imitation", "imitation weight", &RunConfig::loss_imitation),
        dbl_key("loss.collision", "collision weight", &RunConfig::loss_collision),
        dbl_key("loss.consistency", "consistency weight (dm_text_cl only)",
                &RunConfig::loss_consistency),
        dbl_key("rules.turn_deg", "turn threshold (degrees over 3 s)",
                &RunConfig::rules_turn_deg),
        dbl_key("rules.lateral", "lane-change lateral threshold (m)", &RunConfig::rules_lateral),
        dbl_key("rules.accel_ratio", "accelerate speed ratio", &RunConfig::rules_accel_ratio),
        dbl_key("rules.decel_ratio", "decelerate speed ratio", &RunConfig::rules_decel_ratio),
        dbl_key("rules.v_stop", "stop speed threshold (m/s)", &RunConfig::rules_v_stop),
        str_key("client.host", "text-generation endpoint host (empty = offline)",
                &RunConfig::client_host),
        str_key("client.path", "text-generation endpoint path", &RunConfig::client_path),
        str_key("client.token_env", "environment variable holding the bearer token",
                &RunConfig::client_token_env),
        int_key("eval.jobs", "parallel evaluation workers", &RunConfig::jobs),
    };
    return specs;
}

} // namespace detail

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + " line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const auto& spec : detail::key_specs()) {
            if (spec.key != key) continue;
            try {
                spec.set(cfg, value);
            } catch (const std::exception& e) {
                throw ConfigError(path.string() + " line " + std::to_string(line_no) + ": key '" +
                                  key + "': " + e.what());
            }
            known = true;
            break;
        }
        if (!known)
            throw ConfigError(path.string() + " line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
    }
    return cfg;
}

inline void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config " + path.string());
    for (const auto& spec : detail::key_specs())
        out << spec.key << " = " << spec.get(cfg) << '\n';
}

inline std::string config_schema() {
    std::ostringstream out;
    out << "key\ttype\tdefault\tdescription\n";
    const RunConfig defaults;
    for (const auto& spec : detail::key_specs())
        out << spec.key << '\t' << spec.type << '\t' << spec.get(defaults) << '\t' << spec.doc
            << '\n';
    return out.str();
}

} // namespace dme::cli
