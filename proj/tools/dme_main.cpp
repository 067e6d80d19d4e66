#include <CLI11.hpp>

#include "dme/cli/commands.hpp"

namespace {

constexpr const char* kVersion = "dme 1.0.0";

// config file first, explicit flags on top
dme::cli::RunConfig resolve_config(const std::string& config_path) {
    if (config_path.empty()) return {};
    return dme::cli::load_config(config_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DME-Driver desk-scale pipeline: synthetic scenes, text-fused BEV planning, "
                 "training and evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // gen-data
    std::string gen_config, gen_out;
    std::uint64_t gen_seed = 0;
    int gen_scenes = -1, gen_eval = -1, gen_agents = -1;
    auto* gen = app.add_subcommand("gen-data",
                                   "generate scenes, decision texts, dialogues and a vocabulary");
    gen->add_option("--config", gen_config, "config file");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--scenes", gen_scenes, "training scene count");
    gen->add_option("--eval", gen_eval, "held-out scene count");
    gen->add_option("--agents", gen_agents, "max agents per scene (0..8)");
    gen->add_option("--out", gen_out, "output directory");

    // train
    std::string train_config, train_out;
    auto* train = app.add_subcommand("train", "train the planner from a generated dataset");
    train->add_option("--config", train_config, "config file")->required();
    train->add_option("--out", train_out, "output directory override");

    // eval
    dme::cli::EvalArgs eval_args;
    std::string eval_config;
    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on the held-out split");
    eval->add_option("--checkpoint", eval_args.checkpoint, "checkpoint file (.dmep)");
    eval->add_option("--data", eval_args.data_dir, "dataset directory")->required();
    eval->add_option("--report", eval_args.report, "CSV report path")->required();
    eval->add_option("--markdown", eval_args.markdown, "also write a markdown report");
    eval->add_option("--trace", eval_args.trace, "decision-trace log path");
    eval->add_option("--ablation", eval_args.ablation, "text cues fed at eval time");
    eval->add_option("--jobs", eval_args.jobs, "parallel workers");
    eval->add_option("--fail-if-l2-above", eval_args.fail_if_l2_above,
                     "exit 1 when L2 avg exceeds this many meters");
    eval->add_flag("--expert", eval_args.use_expert,
                   "evaluate the expert labels instead of a checkpoint");
    eval->add_option("--config", eval_config, "config file (thresholds)");

    // ablate
    std::string ablate_config, ablate_out, ablate_preset = "table3";
    auto* ablate = app.add_subcommand("ablate", "run the four-row ablation grid");
    ablate->add_option("--config", ablate_config, "config file")->required();
    ablate->add_option("--preset", ablate_preset, "ablation preset (table3)");
    ablate->add_option("--out", ablate_out, "output directory override");

    // validate-records
    std::string validate_path;
    bool validate_strict = false;
    auto* validate = app.add_subcommand("validate-records",
                                        "check a .hbd.jsonl dialogue record file");
    validate->add_option("--in", validate_path, "record file")->required();
    validate->add_flag("--strict", validate_strict, "abort on the first malformed line");

    // plot
    std::string plot_loss, plot_report, plot_out = ".";
    auto* plot = app.add_subcommand("plot", "render loss curves and metric bars as static SVGs");
    plot->add_option("--loss", plot_loss, "loss.csv from a training run");
    plot->add_option("--report", plot_report, "ablation.csv for metric bars");
    plot->add_option("--out", plot_out, "output directory");

    // config-schema
    auto* schema = app.add_subcommand("config-schema", "print every config key with its default");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return dme::cli::kExitUsage;
    }

    try {
        if (gen->parsed()) {
            dme::cli::RunConfig cfg = resolve_config(gen_config);
            if (gen->count("--seed")) cfg.seed = gen_seed;
            if (gen->count("--scenes")) cfg.scenes_train = gen_scenes;
            if (gen->count("--eval")) cfg.scenes_eval = gen_eval;
            if (gen->count("--agents")) cfg.max_agents = gen_agents;
            if (!gen_out.empty()) cfg.data_dir = gen_out;
            return dme::cli::cmd_gen_data(cfg);
        }
        if (train->parsed()) {
            dme::cli::RunConfig cfg = dme::cli::load_config(train_config);
            if (!train_out.empty()) cfg.out_dir = train_out;
            return dme::cli::cmd_train(cfg);
        }
        if (eval->parsed()) {
            dme::cli::RunConfig cfg = resolve_config(eval_config);
            return dme::cli::cmd_eval(eval_args, cfg);
        }
        if (ablate->parsed()) {
            dme::cli::RunConfig cfg = dme::cli::load_config(ablate_config);
            if (!ablate_out.empty()) cfg.out_dir = ablate_out;
            return dme::cli::cmd_ablate(cfg, ablate_preset);
        }
        if (validate->parsed())
            return dme::cli::cmd_validate_records(validate_path, validate_strict);
        if (plot->parsed()) return dme::cli::cmd_plot(plot_loss, plot_report, plot_out);
        if (schema->parsed()) {
            std::cout << dme::cli::config_schema();
            return dme::cli::kExitOk;
        }
    } catch (const dme::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dme::cli::kExitUsage;
    } catch (const dme::planner::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return dme::cli::kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dme::cli::kExitUsage;
    }
    return dme::cli::kExitUsage;
}
