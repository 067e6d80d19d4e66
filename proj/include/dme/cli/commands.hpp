#pragma once

#include <iostream>
#include <thread>

#include "dme/cli/config.hpp"
#include "dme/cli/dataset.hpp"
#include "dme/decision/http_client.hpp"
#include "dme/decision/remote_dm.hpp"
#include "dme/eval/judge.hpp"
#include "dme/eval/report.hpp"
#include "dme/hbd/augment.hpp"
#include "dme/hbd/records.hpp"
#include "dme/planner/checkpoint.hpp"
#include "dme/sim/generate.hpp"

namespace dme::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitGate = 1;     // threshold gate tripped
inline constexpr int kExitUsage = 2;    // usage or input error
inline constexpr int kExitNumeric = 3;  // numeric failure (NaN loss)

namespace fs = std::filesystem;

// ---- gen-data ----------------------------------------------------------

// Scenario tags cycle through the eight categories so every split is
// balanced; scene i draws its own seed stream from the master seed.
inline sim::Scene generate_indexed_scene(std::uint64_t seed, int index,
                                         const sim::GenConfig& base) {
    sim::GenConfig cfg = base;
    cfg.tag = decision::all_categories()[static_cast<std::size_t>(index) %
                                         decision::kCategoryCount];
    sim::Scene scene = sim::generate_scene(Rng::mix(seed, static_cast<std::uint64_t>(index) + 1),
                                           cfg);
    char id[16];
    std::snprintf(id, sizeof(id), "s%06d", index);
    scene.id = id;
    return scene;
}

inline std::vector<hbd::DialoguePart> dialogue_parts(const sim::Scene& scene,
                                                     const decision::DriverLogicOutput& logic) {
    std::ostringstream control;
    control.precision(1);
    control << std::fixed << "Over the next three seconds I pass through";
    for (const sim::Vec2& p : scene.expert.points) control << " (" << p.x << ", " << p.y << ")";
    control << ".";
    return {
        {hbd::PartType::Gaze, logic.gaze_text},
        {hbd::PartType::Description, logic.description_text},
        {hbd::PartType::Reasoning, logic.reasoning_text},
        {hbd::PartType::Decision, logic.decision_text},
        {hbd::PartType::ControlSignal, control.str()},
    };
}

inline int cmd_gen_data(const RunConfig& cfg) {
    if (cfg.scenes_train < 1) {
        std::cerr << "gen-data: --scenes must be >= 1\n";
        return kExitUsage;
    }
    if (cfg.scenes_eval < 0) {
        std::cerr << "gen-data: --eval must be >= 0\n";
        return kExitUsage;
    }
    const fs::path out_dir = cfg.data_dir;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) {
        std::cerr << "gen-data: cannot create output directory " << out_dir << "\n";
        return kExitUsage;
    }

    const int total = cfg.scenes_train + cfg.scenes_eval;
    const sim::GenConfig base = cfg.gen_config();

    // Decision texts come from the scripted stand-in unless a remote
    // endpoint is configured; the remote path is staged here, before
    // training, and every exchange is logged for audit.
    std::unique_ptr<decision::TextGenerationClient> remote;
    std::unique_ptr<decision::ClientLog> client_log;
    if (!cfg.client_host.empty()) {
        remote = std::make_unique<decision::HttpTextClient>(cfg.client_host, cfg.client_path,
                                                            cfg.client_token_env);
        client_log =
            std::make_unique<decision::ClientLog>((out_dir / "client_log.jsonl").string());
    }

    std::vector<sim::Scene> scenes;
    std::vector<decision::DriverLogicOutput> logic;
    std::vector<hbd::DialogueRecord> dialogues;
    std::vector<std::string> corpus;
    std::map<std::string, int> category_counts;

    for (int i = 0; i < total; ++i) {
        sim::Scene scene = generate_indexed_scene(cfg.seed, i, base);
        decision::DriverLogicOutput dm;
        if (remote) {
            const auto result =
                decision::remote_decision_maker(scene, *remote, 3, client_log.get());
            if (!result.warning.empty()) std::cerr << scene.id << ": " << result.warning << "\n";
            dm = result.logic;
        } else {
            dm = decision::scripted_decision_maker(scene);
        }
        const decision::DriverLogicOutput gt = decision::ground_truth_logic(scene);
        ++category_counts[decision::category_name(scene.tag)];

        for (const auto& text : {dm.gaze_text, dm.description_text, dm.reasoning_text,
                                 dm.decision_text, gt.gaze_text, gt.description_text,
                                 gt.reasoning_text, gt.decision_text})
            corpus.push_back(text);

        auto assembled =
            hbd::assemble_dialogue(dialogue_parts(scene, dm), hbd::DialogueSource::synthetic,
                                   scene.id);
        dialogues.push_back(assembled.record);
        auto augmented = hbd::augment(assembled.record);
        if (augmented.rewritten) dialogues.push_back(augmented.record);

        scenes.push_back(std::move(scene));
        logic.push_back(std::move(dm));
    }
    for (const hbd::DialogueRecord& r : dialogues)
        for (const hbd::DialogueTurn& t : r.turns) {
            corpus.push_back(t.question);
            corpus.push_back(t.answer);
        }

    const text::Vocabulary vocab = text::Vocabulary::build(corpus);
    vocab.save(out_dir / "vocab.tsv");

    const std::span<const sim::Scene> all(scenes);
    const std::span<const decision::DriverLogicOutput> all_logic(logic);
    sim::write_scenes(out_dir / "scenes_train.jsonl", all.subspan(0, cfg.scenes_train));
    sim::write_scenes(out_dir / "scenes_eval.jsonl", all.subspan(cfg.scenes_train));
    write_logic(out_dir / "logic_train.jsonl", all.subspan(0, cfg.scenes_train),
                all_logic.subspan(0, cfg.scenes_train));
    write_logic(out_dir / "logic_eval.jsonl", all.subspan(cfg.scenes_train),
                all_logic.subspan(cfg.scenes_train));
    hbd::write_records(out_dir / "dialogues.hbd.jsonl", dialogues);

    nlohmann::ordered_json manifest;
    manifest["scenes"] = total;
    manifest["train"] = cfg.scenes_train;
    manifest["eval"] = cfg.scenes_eval;
    manifest["seed"] = cfg.seed;
    manifest["categories"] = category_counts;
    std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';

    RunConfig resolved = cfg;
    save_config(resolved, out_dir / "gen.config");

    std::ofstream log(out_dir / "gen.log");
    log << "generated " << total << " scenes (" << cfg.scenes_train << " train, "
        << cfg.scenes_eval << " eval), " << dialogues.size() << " dialogue records, vocabulary of "
        << vocab.size() << " tokens\n";
    std::cout << "gen-data: wrote " << total << " scenes to " << out_dir << "\n";
    return kExitOk;
}

// ---- train -------------------------------------------------------------

inline int cmd_train(const RunConfig& cfg) {
    const fs::path data_dir = cfg.data_dir;
    if (!fs::exists(data_dir / "scenes_train.jsonl")) {
        std::cerr << "train: no dataset at " << data_dir << " (run gen-data first)\n";
        return kExitUsage;
    }
    const fs::path out_dir = cfg.out_dir;
    fs::create_directories(out_dir);

    const text::Vocabulary vocab = text::Vocabulary::load(data_dir / "vocab.tsv");
    const DatasetSplit train_split = load_split(data_dir, "train");

    planner::TrainResult result;
    try {
        result = planner::train(train_split.examples, vocab, cfg.train_config());
    } catch (const planner::NumericError& e) {
        std::cerr << "train: " << e.what() << "\n";
        return kExitNumeric;
    }

    planner::save_checkpoint(result.params, out_dir / "checkpoint.dmep");
    planner::write_loss_csv(out_dir / "loss.csv", result.log);
    save_config(cfg, out_dir / "resolved.config");

    std::ofstream log(out_dir / "run.log");
    log << "ablation=" << cfg.ablation << " scenes=" << train_split.examples.size()
        << " epochs=" << cfg.epochs << "\n";
    for (std::size_t e = 0; e < result.log.size(); ++e)
        log << "epoch " << e << " imitation=" << result.log[e].imitation
            << " collision=" << result.log[e].collision
            << " consistency=" << result.log[e].consistency << " total=" << result.log[e].total
            << "\n";
    if (!result.log.empty())
        std::cout << "train: final total loss " << result.log.back().total << " after "
                  << result.log.size() << " epochs\n";
    return kExitOk;
}

// ---- eval --------------------------------------------------------------

struct EvalOutcome {
    eval::PlanMetrics metrics;
    std::vector<sim::Trajectory> planned;
    std::vector<decision::DecisionCategory> classified;
};

// Deterministic regardless of the worker count: results land by index.
inline EvalOutcome evaluate_split(const DatasetSplit& split, const planner::PlannerParams& params,
                                  planner::AblationMode mode,
                                  const decision::RuleThresholds& thresholds, int jobs,
                                  bool use_expert) {
    const std::size_t n = split.examples.size();
    EvalOutcome out;
    out.planned.resize(n);
    out.classified.resize(n);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& ex = split.examples[i];
            if (use_expert) {
                out.planned[i] = ex.scene.expert;
            } else {
                const sim::BevGrid grid = sim::rasterize_bev(ex.scene);
                const planner::TextCues cues = planner::select_cues(mode, ex.scene, ex.logic);
                nn::Tape tape;
                planner::PlannerVars vars = planner::register_planner(tape, params);
                nn::Var pred =
                    planner::plan_traced(tape, text::bev_to_tokens(grid), cues, vars, params);
                out.planned[i] = sim::Trajectory::from_matrix(tape.value(pred));
            }
            out.classified[i] =
                decision::classify_trajectory(out.planned[i], ex.scene.ego, thresholds);
        }
    };
    if (jobs <= 1 || n < 2) {
        worker(0, n);
    } else {
        const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker, w * chunk, std::min(n, (w + 1) * chunk));
        for (auto& t : pool) t.join();
    }

    eval::HorizonValues l2;
    std::vector<eval::EvalCase> cases;
    std::vector<sim::EgoStatus> egos;
    std::vector<decision::DecisionCategory> commanded;
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = eval::l2_at_horizons(out.planned[i], split.examples[i].scene.expert);
        l2.h1 += v.h1;
        l2.h2 += v.h2;
        l2.h3 += v.h3;
        cases.push_back({&out.planned[i], &split.examples[i].scene});
        egos.push_back(split.examples[i].scene.ego);
        commanded.push_back(split.examples[i].logic.category);
    }
    l2.h1 /= static_cast<double>(n);
    l2.h2 /= static_cast<double>(n);
    l2.h3 /= static_cast<double>(n);
    l2.avg = (l2.h1 + l2.h2 + l2.h3) / 3.0;
    out.metrics.l2 = l2;
    out.metrics.collision = eval::collision_rate(cases);
    out.metrics.mismatch_rate =
        eval::decision_mismatch_rate(out.planned, egos, commanded, thresholds);
    return out;
}

// one line per evaluated scene pairing the planned trajectory with the
// Decision-Maker texts that steered it
inline void write_decision_trace(const fs::path& path, const DatasetSplit& split,
                                 const EvalOutcome& outcome) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write decision trace " + path.string());
    for (std::size_t i = 0; i < split.examples.size(); ++i) {
        const auto& ex = split.examples[i];
        nlohmann::ordered_json planned = nlohmann::ordered_json::array();
        for (const sim::Vec2& p : outcome.planned[i].points) planned.push_back({p.x, p.y});
        nlohmann::ordered_json j{
            {"scene", ex.scene.id},
            {"category", decision::category_name(ex.logic.category)},
            {"gaze", ex.logic.gaze_text},
            {"description", ex.logic.description_text},
            {"reasoning", ex.logic.reasoning_text},
            {"decision", ex.logic.decision_text},
            {"planned", std::move(planned)},
            {"classified", decision::category_name(outcome.classified[i])}};
        out << j.dump() << '\n';
    }
}

struct EvalArgs {
    std::string checkpoint;
    std::string data_dir;
    std::string report;
    std::string markdown;     // optional
    std::string trace;        // optional; defaults next to the report
    std::string ablation = "dm_text";
    double fail_if_l2_above = -1.0;  // < 0 disables the gate
    int jobs = 1;
    bool use_expert = false;
};

inline int cmd_eval(const EvalArgs& args, const RunConfig& base = {}) {
    const fs::path data_dir = args.data_dir;
    if (!fs::exists(data_dir / "scenes_eval.jsonl")) {
        std::cerr << "eval: missing dataset at " << data_dir << "\n";
        return kExitUsage;
    }
    if (!args.use_expert && !fs::exists(args.checkpoint)) {
        std::cerr << "eval: missing checkpoint " << args.checkpoint << "\n";
        return kExitUsage;
    }
    const auto mode = planner::parse_ablation(args.ablation);
    if (!mode) {
        std::cerr << "eval: unknown ablation mode '" << args.ablation << "'\n";
        return kExitUsage;
    }

    const text::Vocabulary vocab = text::Vocabulary::load(data_dir / "vocab.tsv");
    const DatasetSplit split = load_split(data_dir, "eval");
    planner::PlannerParams params;
    if (!args.use_expert) params = planner::load_checkpoint(args.checkpoint, vocab);

    const EvalOutcome outcome =
        evaluate_split(split, params, *mode, base.thresholds(), args.jobs, args.use_expert);

    const fs::path report_path = args.report;
    if (report_path.has_parent_path()) fs::create_directories(report_path.parent_path());
    eval::emit_report(outcome.metrics, report_path, eval::ReportFormat::csv);
    if (!args.markdown.empty())
        eval::emit_report(outcome.metrics, args.markdown, eval::ReportFormat::markdown);

    const fs::path trace_path = args.trace.empty()
                                    ? report_path.parent_path() / "decision_trace.jsonl"
                                    : fs::path(args.trace);
    write_decision_trace(trace_path, split, outcome);

    // the run directory carries its resolved settings and a log beside the
    // report and the decision trace
    const fs::path run_dir = report_path.parent_path();
    save_config(base, run_dir / "eval.config");
    {
        std::ofstream log(run_dir / "eval.log");
        log << "checkpoint=" << (args.use_expert ? "<expert labels>" : args.checkpoint)
            << " data=" << args.data_dir << " ablation=" << args.ablation
            << " scenes=" << split.examples.size() << " jobs=" << args.jobs << "\n"
            << eval::metrics_csv_header(outcome.metrics) << "\n"
            << eval::metrics_csv_row(outcome.metrics) << "\n";
    }

    std::cout << "eval: " << eval::metrics_csv_header(outcome.metrics) << "\n"
              << "eval: " << eval::metrics_csv_row(outcome.metrics) << "\n";

    if (args.fail_if_l2_above >= 0.0 && outcome.metrics.l2.avg > args.fail_if_l2_above) {
        std::cerr << "eval: L2 avg " << outcome.metrics.l2.avg << " exceeds gate "
                  << args.fail_if_l2_above << "\n";
        return kExitGate;
    }
    return kExitOk;
}

// ---- ablate ------------------------------------------------------------

inline const std::array<std::pair<planner::AblationMode, std::string>, 4>& table3_rows() {
    static const std::array<std::pair<planner::AblationMode, std::string>, 4> rows = {{
        {planner::AblationMode::executor_only, "executor"},
        {planner::AblationMode::gt_text, "gt+executor"},
        {planner::AblationMode::dm_text, "dm+executor"},
        {planner::AblationMode::dm_text_cl, "dm+executor+cl"},
    }};
    return rows;
}

inline int cmd_ablate(const RunConfig& cfg, const std::string& preset) {
    if (preset != "table3") {
        std::cerr << "ablate: unknown preset '" << preset << "' (expected 'table3')\n";
        return kExitUsage;
    }
    const fs::path data_dir = cfg.data_dir;
    if (!fs::exists(data_dir / "scenes_train.jsonl")) {
        std::cerr << "ablate: no dataset at " << data_dir << " (run gen-data first)\n";
        return kExitUsage;
    }
    const fs::path out_dir = cfg.out_dir;
    fs::create_directories(out_dir);

    const text::Vocabulary vocab = text::Vocabulary::load(data_dir / "vocab.tsv");
    const DatasetSplit train_split = load_split(data_dir, "train");
    const DatasetSplit eval_split = load_split(data_dir, "eval");

    // all four rows share the same seed, data and eval scene ids
    {
        std::ofstream ids(out_dir / "eval_scenes.txt");
        for (const auto& ex : eval_split.examples) ids << ex.scene.id << '\n';
    }

    std::vector<eval::AblationRow> rows;
    std::ofstream log(out_dir / "run.log");
    for (const auto& [mode, label] : table3_rows()) {
        RunConfig mode_cfg = cfg;
        mode_cfg.ablation = planner::ablation_name(mode);

        planner::TrainResult result;
        try {
            result = planner::train(train_split.examples, vocab, mode_cfg.train_config());
        } catch (const planner::NumericError& e) {
            std::cerr << "ablate: " << e.what() << "\n";
            return kExitNumeric;
        }
        const fs::path mode_dir = out_dir / planner::ablation_name(mode);
        fs::create_directories(mode_dir);
        planner::save_checkpoint(result.params, mode_dir / "checkpoint.dmep");
        planner::write_loss_csv(mode_dir / "loss.csv", result.log);

        EvalOutcome outcome = evaluate_split(eval_split, result.params, mode, cfg.thresholds(),
                                             cfg.jobs, false);
        write_decision_trace(mode_dir / "decision_trace.jsonl", eval_split, outcome);
        log << label << ": " << eval::metrics_csv_row(outcome.metrics) << "\n";
        std::cout << "ablate: " << label << " -> l2_avg "
                  << eval::format_2dp(outcome.metrics.l2.avg) << ", mismatch "
                  << eval::format_2dp(outcome.metrics.mismatch_rate.value_or(0.0)) << "%\n";
        rows.push_back({label, outcome.metrics});
    }

    eval::emit_ablation_report(rows, out_dir / "ablation.csv", eval::ReportFormat::csv);
    eval::emit_ablation_report(rows, out_dir / "ablation.md", eval::ReportFormat::markdown);
    save_config(cfg, out_dir / "resolved.config");
    return kExitOk;
}

// ---- validate-records ----------------------------------------------------

inline int cmd_validate_records(const std::string& path, bool strict) {
    if (!fs::exists(path)) {
        std::cerr << "validate-records: no such file " << path << "\n";
        return kExitUsage;
    }
    hbd::ReadStats stats;
    try {
        hbd::read_records(path, strict, &stats);
    } catch (const hbd::RecordError& e) {
        std::cerr << "validate-records: " << e.what() << "\n";
        return kExitGate;
    }
    for (const std::string& d : stats.diagnostics) std::cerr << d << "\n";
    std::cout << "validate-records: " << stats.parsed << " records ok, " << stats.skipped
              << " skipped\n";
    return kExitOk;
}

// ---- plot ----------------------------------------------------------------

// grouped bar chart of an ablation report ("mode,l2_avg,col_avg,mismatch_rate")
inline int plot_metric_bars(const std::string& report_csv, const fs::path& out_dir) {
    std::ifstream in(report_csv);
    if (!in) {
        std::cerr << "plot: cannot read " << report_csv << "\n";
        return kExitUsage;
    }
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::string> labels;
    std::vector<std::array<double, 3>> values;  // l2, col, mismatch
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string label, cell;
        std::getline(cells, label, ',');
        std::array<double, 3> row{};
        for (int i = 0; i < 3 && std::getline(cells, cell, ','); ++i) row[i] = std::stod(cell);
        labels.push_back(label);
        values.push_back(row);
    }
    if (labels.empty()) {
        std::cerr << "plot: no rows in " << report_csv << "\n";
        return kExitUsage;
    }
    const fs::path svg_path = out_dir / "metric_bars.svg";
    std::ofstream svg(svg_path);
    const double w = 640, h = 360, ml = 50, mb = 60, mt = 10;
    static const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    static const char* names[3] = {"L2 avg (m)", "col avg (%)", "mismatch (%)"};
    double max_v = 1e-12;
    for (const auto& r : values)
        for (double v : r) max_v = std::max(max_v, v);
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n";
    const double group_w = (w - ml - 10) / static_cast<double>(labels.size());
    for (std::size_t g = 0; g < labels.size(); ++g) {
        for (int s = 0; s < 3; ++s) {
            const double bh = (h - mb - mt) * values[g][static_cast<std::size_t>(s)] / max_v;
            const double x = ml + group_w * static_cast<double>(g) + group_w * 0.1 +
                             s * group_w * 0.27;
            svg << "<rect x='" << x << "' y='" << h - mb - bh << "' width='" << group_w * 0.24
                << "' height='" << bh << "' fill='" << colors[s] << "'/>\n";
        }
        svg << "<text x='" << ml + group_w * (static_cast<double>(g) + 0.5) << "' y='"
            << h - mb + 16 << "' font-size='11' text-anchor='middle'>" << labels[g]
            << "</text>\n";
    }
    for (int s = 0; s < 3; ++s)
        svg << "<text x='" << ml << "' y='" << h - 30 + 12 * s << "' fill='" << colors[s]
            << "' font-size='11'>" << names[s] << "</text>\n";
    svg << "</svg>\n";
    std::cout << "plot: wrote " << svg_path << "\n";
    return kExitOk;
}

// static SVG chart of the four loss curves
inline int plot_loss_curves(const std::string& loss_csv, const fs::path& out_dir) {
    std::ifstream in(loss_csv);
    if (!in) {
        std::cerr << "plot: cannot read " << loss_csv << "\n";
        return kExitUsage;
    }
    std::vector<std::array<double, 4>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 4> row{};
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');  // epoch
        for (int i = 0; i < 4 && std::getline(cells, cell, ','); ++i) row[i] = std::stod(cell);
        rows.push_back(row);
    }
    if (rows.empty()) {
        std::cerr << "plot: no data rows in " << loss_csv << "\n";
        return kExitUsage;
    }
    fs::create_directories(out_dir);
    const fs::path svg_path = fs::path(out_dir) / "loss_curves.svg";
    std::ofstream svg(svg_path);

    const double w = 640, h = 400, ml = 50, mb = 30, mt = 10, mr = 10;
    double max_v = 1e-12;
    for (const auto& r : rows)
        for (double v : r) max_v = std::max(max_v, v);
    static const char* colors[4] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
    static const char* names[4] = {"imitation", "collision", "consistency", "total"};

    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
        << "' stroke='black'/>\n"
        << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
        << "' stroke='black'/>\n";
    for (int s = 0; s < 4; ++s) {
        svg << "<polyline fill='none' stroke='" << colors[s] << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double x = ml + (w - ml - mr) * (rows.size() == 1 ? 0.5 : static_cast<double>(i) / (rows.size() - 1));
            const double y = h - mb - (h - mb - mt) * (rows[i][s] / max_v);
            svg << x << ',' << y << ' ';
        }
        svg << "'/>\n<text x='" << w - 150 << "' y='" << mt + 16 * (s + 1) << "' fill='"
            << colors[s] << "' font-size='12'>" << names[s] << "</text>\n";
    }
    svg << "<text x='" << ml << "' y='" << mt + 10 << "' font-size='11'>max " << max_v
        << "</text>\n</svg>\n";
    std::cout << "plot: wrote " << svg_path << "\n";
    return kExitOk;
}

inline int cmd_plot(const std::string& loss_csv, const std::string& report_csv,
                    const std::string& out_dir) {
    if (loss_csv.empty() && report_csv.empty()) {
        std::cerr << "plot: pass --loss and/or --report\n";
        return kExitUsage;
    }
    fs::create_directories(out_dir);
    if (!loss_csv.empty())
        if (const int rc = plot_loss_curves(loss_csv, out_dir); rc != kExitOk) return rc;
    if (!report_csv.empty())
        if (const int rc = plot_metric_bars(report_csv, out_dir); rc != kExitOk) return rc;
    return kExitOk;
}

} // namespace dme::cli
