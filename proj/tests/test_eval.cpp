#include <doctest.h>

#include <filesystem>

#include "dme/eval/judge.hpp"
#include "dme/eval/metrics.hpp"
#include "dme/eval/report.hpp"
#include "dme/sim/generate.hpp"

using namespace dme;
using sim::Trajectory;

TEST_SUITE_BEGIN("eval");

namespace {

Trajectory straight(double speed) {
    Trajectory t;
    for (int i = 0; i < Trajectory::kWaypoints; ++i)
        t.points[i] = {speed * Trajectory::time_of(i), 0.0};
    return t;
}

} // namespace

TEST_CASE("l2: identical, 3-4-5 offset, length checks") {
    const Trajectory expert = straight(4.0);
    const auto zero = eval::l2_at_horizons(expert, expert);
    CHECK(zero.h1 == 0.0);
    CHECK(zero.h2 == 0.0);
    CHECK(zero.h3 == 0.0);
    CHECK(zero.avg == 0.0);

    Trajectory off = expert;
    for (auto& p : off.points) {
        p.x += 0.3;
        p.y += 0.4;
    }
    const auto v = eval::l2_at_horizons(off, expert);
    CHECK(v.h1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.h2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.h3 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.avg == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("reference row formatting fixture") {
    // the average of the three horizon values is the reported Avg column
    eval::PlanMetrics m;
    m.l2 = {0.48, 0.96, 1.65, (0.48 + 0.96 + 1.65) / 3.0};
    m.collision = {0.05, 0.17, 0.71, (0.05 + 0.17 + 0.71) / 3.0};
    CHECK(eval::format_2dp(m.l2.avg) == "1.03");
    CHECK(eval::metrics_csv_row(m) == "0.48,0.96,1.65,1.03,0.05,0.17,0.71,0.31");

    eval::PlanMetrics dme_row;
    dme_row.l2 = {0.45, 0.91, 1.58, (0.45 + 0.91 + 1.58) / 3.0};
    dme_row.collision = {0.05, 0.15, 0.68, (0.05 + 0.15 + 0.68) / 3.0};
    CHECK(eval::metrics_csv_row(dme_row) == "0.45,0.91,1.58,0.98,0.05,0.15,0.68,0.29");

    eval::PlanMetrics zeros;
    CHECK(eval::metrics_csv_row(zeros) == "0.00,0.00,0.00,0.00,0.00,0.00,0.00,0.00");
}

TEST_CASE("collision_rate: empty scenes, one late collision, duplication") {
    sim::GenConfig cfg;
    cfg.max_agents = 0;
    cfg.tag = decision::DecisionCategory::Forward;
    std::vector<sim::Scene> scenes;
    for (int i = 0; i < 4; ++i)
        scenes.push_back(sim::generate_scene(100 + static_cast<std::uint64_t>(i), cfg));
    std::vector<Trajectory> preds;
    for (const auto& s : scenes) preds.push_back(s.expert);

    std::vector<eval::EvalCase> cases;
    for (std::size_t i = 0; i < 4; ++i) cases.push_back({&preds[i], &scenes[i]});
    const auto clean = eval::collision_rate(cases);
    CHECK(clean.h1 == 0.0);
    CHECK(clean.h2 == 0.0);
    CHECK(clean.h3 == 0.0);
    CHECK(clean.avg == 0.0);

    // drop a static obstacle onto scene 0's final waypoint only
    sim::Agent blocker;
    blocker.position = {preds[0].points[5].x, preds[0].points[5].y};
    blocker.half_x = blocker.half_y = 0.4;
    scenes[0].agents.push_back(blocker);
    for (int k = 0; k < sim::BevGrid::kTimeSteps; ++k)
        scenes[0].occupancy[k] = sim::occupancy_at(scenes[0], 0.5 * k);
    REQUIRE(preds[0].points[5].x < sim::BevGrid::kExtent);  // stays on-grid

    const auto one = eval::collision_rate(cases);
    CHECK(one.h1 == 0.0);
    CHECK(one.h2 == 0.0);
    CHECK(one.h3 == doctest::Approx(25.0));

    // duplicating the colliding case four times gives 100% at 3 s
    std::vector<eval::EvalCase> dup(4, eval::EvalCase{&preds[0], &scenes[0]});
    const auto full = eval::collision_rate(dup);
    CHECK(full.h3 == doctest::Approx(100.0));
    CHECK(full.h1 <= full.h2);
    CHECK(full.h2 <= full.h3);
}

TEST_CASE("collision rates are monotone in the horizon") {
    Rng rng(2718);
    sim::GenConfig cfg;
    std::vector<sim::Scene> scenes;
    std::vector<Trajectory> preds;
    for (int i = 0; i < 60; ++i) {
        scenes.push_back(sim::generate_scene(500 + static_cast<std::uint64_t>(i), cfg));
        Trajectory noisy = scenes.back().expert;
        for (auto& p : noisy.points) {
            p.x += rng.uniform(-2.0, 2.0);
            p.y += rng.uniform(-2.0, 2.0);
        }
        preds.push_back(noisy);
    }
    std::vector<eval::EvalCase> cases;
    for (std::size_t i = 0; i < scenes.size(); ++i) cases.push_back({&preds[i], &scenes[i]});
    const auto rates = eval::collision_rate(cases);
    CHECK(rates.h1 <= rates.h2);
    CHECK(rates.h2 <= rates.h3);
    CHECK(rates.avg == doctest::Approx((rates.h1 + rates.h2 + rates.h3) / 3.0));
}

TEST_CASE("decision mismatch rate: trivial cases and brute-force agreement") {
    const decision::RuleThresholds th;
    std::vector<Trajectory> preds = {straight(4.0), straight(4.0)};
    std::vector<sim::EgoStatus> egos = {{4.0, 0.0}, {4.0, 0.0}};
    std::vector<decision::DecisionCategory> cats = {decision::DecisionCategory::Forward,
                                                    decision::DecisionCategory::Forward};
    CHECK(eval::decision_mismatch_rate(preds, egos, cats, th) == 0.0);

    cats[1] = decision::DecisionCategory::TurnLeft;
    CHECK(eval::decision_mismatch_rate(preds, egos, cats, th) == doctest::Approx(50.0));

    cats.pop_back();
    CHECK_THROWS_AS(eval::decision_mismatch_rate(preds, egos, cats, th), std::invalid_argument);

    // agreement with an independent re-classification over random pairs
    Rng rng(3141);
    std::vector<Trajectory> rp;
    std::vector<sim::EgoStatus> re;
    std::vector<decision::DecisionCategory> rc;
    for (int i = 0; i < 200; ++i) {
        Trajectory t;
        for (int k = 0; k < Trajectory::kWaypoints; ++k)
            t.points[k] = {rng.uniform(-15, 15), rng.uniform(-15, 15)};
        rp.push_back(t);
        re.push_back({rng.uniform(0.5, 8.0), 0.0});
        rc.push_back(decision::all_categories()[static_cast<std::size_t>(rng.uniform_int(0, 7))]);
    }
    int mismatched = 0;
    for (std::size_t i = 0; i < rp.size(); ++i)
        if (decision::classify_trajectory(rp[i], re[i], th) != rc[i]) ++mismatched;
    CHECK(eval::decision_mismatch_rate(rp, re, rc, th) ==
          doctest::Approx(100.0 * mismatched / 200.0));
}

TEST_CASE("offline judge: identity, disjoint and hand-computed F1") {
    eval::OfflineJudge judge;
    decision::DriverLogicOutput ref;
    ref.gaze_text = "I watch the truck ahead.";
    ref.description_text = "A narrow lane with parked cars.";
    ref.reasoning_text = "The truck may brake soon.";
    ref.decision_text = "I will slow down to keep a safe gap.";
    ref.category = decision::DecisionCategory::Decelerate;

    const auto self = judge.score(ref, ref);
    CHECK(self.gaze == 1.0);
    CHECK(self.scene_understanding == 1.0);
    CHECK(self.reasoning == 1.0);
    CHECK(self.decision == 1.0);

    decision::DriverLogicOutput disjoint;
    disjoint.gaze_text = "nothing shared here";
    disjoint.description_text = "completely different words";
    disjoint.reasoning_text = "unrelated clause entirely";
    disjoint.decision_text = "zzz yyy xxx";
    disjoint.category = decision::DecisionCategory::TurnRight;
    const auto zero = judge.score(disjoint, ref);
    CHECK(zero.gaze == 0.0);
    CHECK(zero.scene_understanding == 0.0);
    CHECK(zero.reasoning == 0.0);
    CHECK(zero.decision == 0.0);

    // same category: decision scores 1.0 even with different words
    decision::DriverLogicOutput pred = ref;
    pred.decision_text = "I will turn left at the intersection";
    pred.category = decision::DecisionCategory::TurnLeft;
    decision::DriverLogicOutput ref2 = ref;
    ref2.decision_text = "I turn left here";
    ref2.category = decision::DecisionCategory::TurnLeft;
    const auto same_cat = judge.score(pred, ref2);
    CHECK(same_cat.decision == 1.0);

    // hand-computed token F1: "i watch the truck ahead" (5 tokens) vs
    // "i watch the red truck" (5 tokens), overlap 4 -> F1 = 0.8
    CHECK(eval::token_f1("I watch the truck ahead.", "I watch the red truck.") ==
          doctest::Approx(0.8));
}

namespace {

class CannedClient : public decision::TextGenerationClient {
public:
    explicit CannedClient(std::string reply) : reply_(std::move(reply)) {}
    std::string generate(const decision::GenerationRequest&) override { return reply_; }

private:
    std::string reply_;
};

} // namespace

TEST_CASE("remote judge parses well-formed replies and falls back otherwise") {
    decision::DriverLogicOutput ref;
    ref.gaze_text = "I watch the truck.";
    ref.description_text = "A narrow lane.";
    ref.reasoning_text = "The truck may brake.";
    ref.decision_text = "I will slow down.";
    ref.category = decision::DecisionCategory::Decelerate;

    CannedClient good("gaze: 0.9\nscene: 0.8\nreasoning: 0.7\ndecision: 1.0");
    eval::RemoteJudge judge(good);
    const auto s = judge.score(ref, ref);
    CHECK(s.gaze == doctest::Approx(0.9));
    CHECK(s.scene_understanding == doctest::Approx(0.8));
    CHECK(s.reasoning == doctest::Approx(0.7));
    CHECK(s.decision == doctest::Approx(1.0));

    // gibberish reply: offline fallback scores the identical pair as all 1s
    CannedClient bad("no scores here");
    eval::RemoteJudge fallback(bad);
    const auto f = fallback.score(ref, ref);
    CHECK(f.gaze == 1.0);
    CHECK(f.decision == 1.0);

    // transport failure after retries: offline fallback as well
    class DownClient : public decision::TextGenerationClient {
    public:
        std::string generate(const decision::GenerationRequest&) override {
            throw decision::TransportError("down");
        }
    };
    DownClient down;
    eval::RemoteJudge unreachable(down);
    CHECK(unreachable.score(ref, ref).reasoning == 1.0);

    // out-of-range scores are rejected, not clamped
    CannedClient out_of_range("gaze: 1.4\nscene: 0.5\nreasoning: 0.5\ndecision: 0.5");
    eval::RemoteJudge ranged(out_of_range);
    CHECK(ranged.score(ref, ref).gaze == 1.0);  // fell back to offline
}

TEST_CASE("judge scores stay in [0, 1] over random template pairs") {
    Rng rng(99);
    eval::OfflineJudge judge;
    sim::GenConfig cfg;
    for (int trial = 0; trial < 30; ++trial) {
        const auto s1 = sim::generate_scene(900 + static_cast<std::uint64_t>(trial), cfg);
        const auto s2 = sim::generate_scene(1900 + static_cast<std::uint64_t>(trial), cfg);
        const auto score = judge.score(decision::scripted_decision_maker(s1),
                                       decision::scripted_decision_maker(s2));
        for (double v : {score.gaze, score.scene_understanding, score.reasoning, score.decision}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("reports: csv layout, markdown round-trip, ablation table") {
    eval::PlanMetrics m;
    m.l2 = {0.45, 0.91, 1.58, 0.98};
    m.collision = {0.05, 0.15, 0.68, 0.29333};
    m.mismatch_rate = 12.5;

    const auto dir = std::filesystem::temp_directory_path();
    const auto csv_path = dir / "dme_report_test.csv";
    const auto md_path = dir / "dme_report_test.md";
    eval::emit_report(m, csv_path, eval::ReportFormat::csv);
    eval::emit_report(m, md_path, eval::ReportFormat::markdown);

    std::ifstream csv(csv_path);
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "l2_1s,l2_2s,l2_3s,l2_avg,col_1s,col_2s,col_3s,col_avg,mismatch_rate");
    CHECK(row == "0.45,0.91,1.58,0.98,0.05,0.15,0.68,0.29,12.50");

    const eval::PlanMetrics back = eval::parse_markdown_report(md_path);
    CHECK(back.l2.h1 == doctest::Approx(0.45));
    CHECK(back.l2.avg == doctest::Approx(0.98));
    CHECK(back.collision.h3 == doctest::Approx(0.68));
    CHECK(back.mismatch_rate.value() == doctest::Approx(12.50));

    const eval::AblationRow rows[] = {{"executor", m}, {"gt+executor", m}};
    const auto ab_path = dir / "dme_ablation_test.csv";
    eval::emit_ablation_report(rows, ab_path, eval::ReportFormat::csv);
    std::ifstream ab(ab_path);
    std::getline(ab, header);
    CHECK(header == "mode,l2_avg,col_avg,mismatch_rate");
    std::getline(ab, row);
    CHECK(row == "executor,0.98,0.29,12.50");

    std::filesystem::remove(csv_path);
    std::filesystem::remove(md_path);
    std::filesystem::remove(ab_path);
}

TEST_SUITE_END();
