#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "dme/cli/config.hpp"
#include "dme/hbd/records.hpp"
#include "dme/sim/scene_io.hpp"

// End-to-end checks of the installed binary (path via DME_BIN, set by ctest).

namespace {

namespace fs = std::filesystem;

std::string dme_bin() {
    const char* bin = std::getenv("DME_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "DME_BIN must point at the dme binary");
    return bin;
}

int run(const std::string& args) {
    const std::string cmd = dme_bin() + " " + args;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen-data: determinism, usage errors and manifest counts") {
    const fs::path dir = fresh_dir("dme_cli_gen");
    const std::string out1 = (dir / "a").string();

    CHECK(run("gen-data --seed 1 --scenes 8 --eval 2 --out " + out1 + " > /dev/null") == 0);

    // same seed into the same path: byte-identical files
    const std::string scenes_before = slurp(fs::path(out1) / "scenes_train.jsonl");
    const std::string dialogues_before = slurp(fs::path(out1) / "dialogues.hbd.jsonl");
    const std::string manifest_before = slurp(fs::path(out1) / "manifest.json");
    CHECK(run("gen-data --seed 1 --scenes 8 --eval 2 --out " + out1 + " > /dev/null") == 0);
    CHECK(slurp(fs::path(out1) / "scenes_train.jsonl") == scenes_before);
    CHECK(slurp(fs::path(out1) / "dialogues.hbd.jsonl") == dialogues_before);
    CHECK(slurp(fs::path(out1) / "manifest.json") == manifest_before);

    // N = 0 is a usage error
    CHECK(run("gen-data --seed 1 --scenes 0 --out " + (dir / "b").string() +
              " 2> /dev/null") == 2);

    // manifest category counts sum to the scene count
    const auto manifest = nlohmann::json::parse(manifest_before);
    int sum = 0;
    for (const auto& [cat, count] : manifest.at("categories").items()) sum += count.get<int>();
    CHECK(sum == manifest.at("scenes").get<int>());
    CHECK(manifest.at("scenes").get<int>() == 10);
}

TEST_CASE("train + eval: checkpoint determinism, gate and expert oracle") {
    const fs::path dir = fresh_dir("dme_cli_train");
    const std::string data = (dir / "data").string();
    REQUIRE(run("gen-data --seed 3 --scenes 16 --eval 8 --out " + data + " > /dev/null") == 0);

    const fs::path config_path = dir / "run.config";
    {
        std::ofstream cfg(config_path);
        cfg << "seed = 3\n"
            << "data.dir = " << data << "\n"
            << "out.dir = " << (dir / "run1").string() << "\n"
            << "model.dim = 16\n"
            << "model.heads = 2\n"
            << "train.epochs = 2\n"
            << "train.lr = 0.001\n"
            << "train.ablation = dm_text\n";
    }
    REQUIRE(run("train --config " + config_path.string() + " > /dev/null") == 0);
    CHECK(fs::exists(dir / "run1" / "checkpoint.dmep"));
    CHECK(fs::exists(dir / "run1" / "loss.csv"));
    CHECK(fs::exists(dir / "run1" / "resolved.config"));

    // identical config, identical checkpoint bytes
    REQUIRE(run("train --config " + config_path.string() + " --out " + (dir / "run2").string() +
                " > /dev/null") == 0);
    CHECK(slurp(dir / "run1" / "checkpoint.dmep") == slurp(dir / "run2" / "checkpoint.dmep"));

    // expert labels evaluate to all-zero metrics
    const std::string report = (dir / "expert.csv").string();
    REQUIRE(run("eval --expert --data " + data + " --report " + report + " > /dev/null") == 0);
    std::ifstream rep(report);
    std::string header, row;
    std::getline(rep, header);
    std::getline(rep, row);
    CHECK(header == "l2_1s,l2_2s,l2_3s,l2_avg,col_1s,col_2s,col_3s,col_avg,mismatch_rate");
    CHECK(row == "0.00,0.00,0.00,0.00,0.00,0.00,0.00,0.00,0.00");

    // the decision trace joins every eval scene to its texts
    const auto scenes = dme::sim::read_scenes(fs::path(data) / "scenes_eval.jsonl");
    std::ifstream trace(dir / "decision_trace.jsonl");
    std::string line;
    std::size_t joined = 0;
    std::set<std::string> ids;
    while (std::getline(trace, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK_FALSE(j.at("gaze").get<std::string>().empty());
        CHECK_FALSE(j.at("decision").get<std::string>().empty());
        ids.insert(j.at("scene").get<std::string>());
        ++joined;
    }
    CHECK(joined == scenes.size());
    for (const auto& s : scenes) CHECK(ids.count(s.id) == 1);

    // a zero gate on a nonzero run exits 1
    REQUIRE(run("eval --checkpoint " + (dir / "run1" / "checkpoint.dmep").string() + " --data " +
                data + " --report " + (dir / "gated.csv").string() +
                " --fail-if-l2-above 0.0 > /dev/null 2>&1") == 1);

    // --jobs does not change the report
    REQUIRE(run("eval --checkpoint " + (dir / "run1" / "checkpoint.dmep").string() + " --data " +
                data + " --report " + (dir / "j1.csv").string() + " > /dev/null") == 0);
    REQUIRE(run("eval --checkpoint " + (dir / "run1" / "checkpoint.dmep").string() + " --data " +
                data + " --report " + (dir / "j4.csv").string() + " --jobs 4 > /dev/null") == 0);
    CHECK(slurp(dir / "j1.csv") == slurp(dir / "j4.csv"));

    // missing inputs are usage errors
    CHECK(run("eval --checkpoint /nonexistent.dmep --data " + data + " --report " +
              (dir / "x.csv").string() + " 2> /dev/null") == 2);
    CHECK(run("train --config /nonexistent.config 2> /dev/null") == 2);
}

TEST_CASE("train with an absurd learning rate exits 3") {
    const fs::path dir = fresh_dir("dme_cli_nan");
    const std::string data = (dir / "data").string();
    REQUIRE(run("gen-data --seed 5 --scenes 8 --eval 2 --out " + data + " > /dev/null") == 0);
    const fs::path config_path = dir / "run.config";
    {
        std::ofstream cfg(config_path);
        cfg << "data.dir = " << data << "\nout.dir = " << (dir / "run").string()
            << "\nmodel.dim = 16\nmodel.heads = 2\ntrain.epochs = 40\ntrain.lr = 1000\n";
    }
    CHECK(run("train --config " + config_path.string() + " 2> /dev/null") == 3);
}

TEST_CASE("validate-records: clean, diagnostics and strict mode") {
    const fs::path dir = fresh_dir("dme_cli_validate");
    const fs::path good = dir / "good.hbd.jsonl";
    {
        dme::hbd::DialogueRecord r;
        r.source = dme::hbd::DialogueSource::synthetic;
        r.scene_id = "s0";
        r.turns.push_back({"q", "a"});
        const dme::hbd::DialogueRecord records[] = {r};
        dme::hbd::write_records(good, records);
    }
    CHECK(run("validate-records --in " + good.string() + " > /dev/null") == 0);
    CHECK(run("validate-records --in " + good.string() + " --strict > /dev/null") == 0);

    const fs::path bad = dir / "bad.hbd.jsonl";
    {
        std::ofstream out(bad);
        out << "{\"source\": \"synthetic\", \"scene\": \"s0\", \"turns\": [{\"q\":\"q\",\"a\":\"a\"}], \"needs_review\": false}\n";
        out << "not json at all\n";
    }
    CHECK(run("validate-records --in " + bad.string() + " > /dev/null 2>&1") == 0);
    CHECK(run("validate-records --in " + bad.string() + " --strict > /dev/null 2>&1") == 1);
    CHECK(run("validate-records --in /nonexistent.jsonl 2> /dev/null") == 2);
}

TEST_CASE("config loading rejects unknown keys; schema lists every key") {
    const fs::path dir = fresh_dir("dme_cli_config");
    const fs::path bad = dir / "bad.config";
    std::ofstream(bad) << "unknown.key = 1\n";
    CHECK(run("train --config " + bad.string() + " 2> /dev/null") == 2);

    CHECK(run("config-schema | grep -q 'train.ablation'") == 0);
    CHECK(run("--version | grep -q dme") == 0);

    // library-level check of the same contract
    CHECK_THROWS_AS(dme::cli::load_config(bad), dme::cli::ConfigError);
    const dme::cli::RunConfig defaults;
    const fs::path round = dir / "round.config";
    dme::cli::save_config(defaults, round);
    const dme::cli::RunConfig loaded = dme::cli::load_config(round);
    CHECK(loaded.seed == defaults.seed);
    CHECK(loaded.lr == defaults.lr);
    CHECK(loaded.ablation == defaults.ablation);
}

TEST_CASE("plot renders an SVG from a loss log") {
    const fs::path dir = fresh_dir("dme_cli_plot");
    const fs::path loss = dir / "loss.csv";
    {
        std::ofstream out(loss);
        out << "epoch,imitation,collision,consistency,total\n";
        for (int e = 0; e < 10; ++e)
            out << e << ',' << 10.0 / (e + 1) << ",0.5,0.2," << 10.7 / (e + 1) << '\n';
    }
    CHECK(run("plot --loss " + loss.string() + " --out " + dir.string() + " > /dev/null") == 0);
    const std::string svg = slurp(dir / "loss_curves.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_SUITE_END();
