#include <doctest.h>

#include "dme/nn/grad_check.hpp"
#include "dme/planner/checkpoint.hpp"
#include "dme/planner/train.hpp"
#include "dme/sim/generate.hpp"

using namespace dme;
using nn::Matrix;

TEST_SUITE_BEGIN("planner");

namespace {

text::Vocabulary corpus_vocab() {
    std::vector<std::string> corpus;
    for (decision::DecisionCategory c : decision::all_categories())
        corpus.push_back(decision::decision_template(c));
    corpus.push_back("I am scanning the empty road in front of me.");
    corpus.push_back("vehicle lane meters wide moving second view");
    return text::Vocabulary::build(corpus);
}

std::vector<planner::TrainExample> tiny_dataset(int n, std::uint64_t seed) {
    sim::GenConfig cfg;
    cfg.max_agents = 2;
    std::vector<planner::TrainExample> out;
    for (int i = 0; i < n; ++i) {
        cfg.tag = decision::all_categories()[static_cast<std::size_t>(i) % 8];
        sim::Scene scene = sim::generate_scene(Rng::mix(seed, static_cast<std::uint64_t>(i)), cfg);
        auto logic = decision::scripted_decision_maker(scene);
        out.push_back({std::move(scene), std::move(logic)});
    }
    return out;
}

} // namespace

TEST_CASE("plan with all-zero parameters yields the all-zero trajectory") {
    const text::Vocabulary vocab = corpus_vocab();
    const planner::PlannerParams zero(vocab, {8, 2, 16, 64});
    sim::GenConfig cfg;
    const sim::Scene scene = sim::generate_scene(21, cfg);
    const sim::BevGrid grid = sim::rasterize_bev(scene);
    const auto traj = planner::plan(grid, decision::scripted_decision_maker(scene), zero);
    for (const auto& p : traj.points) {
        CHECK(p.x == 0.0);
        CHECK(p.y == 0.0);
    }
}

TEST_CASE("plan is deterministic and always emits finite 6x2 output") {
    const text::Vocabulary vocab = corpus_vocab();
    sim::GenConfig cfg;
    const sim::Scene scene = sim::generate_scene(22, cfg);
    const sim::BevGrid grid = sim::rasterize_bev(scene);
    const auto logic = decision::scripted_decision_maker(scene);

    for (std::uint64_t seed : {1ULL, 9ULL, 77ULL}) {
        const auto params = planner::PlannerParams::seeded(vocab, {16, 4, 32, 64}, seed);
        const auto a = planner::plan(grid, logic, params);
        const auto b = planner::plan(grid, logic, params);
        CHECK(a == b);
        CHECK(a.to_matrix().all_finite());
    }

    // empty logic (executor-only): still finite, still deterministic
    const auto params = planner::PlannerParams::seeded(vocab, {16, 4, 32, 64}, 5);
    const auto c = planner::plan(grid, std::nullopt, params);
    CHECK(c == planner::plan(grid, std::nullopt, params));
    CHECK(c.to_matrix().all_finite());
}

TEST_CASE("collision loss: empty scene, occupied waypoint, margin") {
    sim::GenConfig cfg;
    cfg.max_agents = 0;
    cfg.tag = decision::DecisionCategory::Forward;
    const sim::Scene empty = sim::generate_scene(23, cfg);
    CHECK(planner::collision_loss(empty.expert, empty) == 0.0);

    // a waypoint centered in an occupied cell contributes exactly the margin
    sim::Scene blocked = empty;
    sim::Agent wall;
    wall.position = {3.0, 0.0};
    wall.half_x = wall.half_y = 1.2;  // covers the cell fully
    blocked.agents.push_back(wall);
    for (int k = 0; k < sim::BevGrid::kTimeSteps; ++k)
        blocked.occupancy[k] = sim::occupancy_at(blocked, 0.5 * k);

    sim::Trajectory probe;
    for (int i = 0; i < sim::Trajectory::kWaypoints; ++i)
        probe.points[i] = {-6.0, -6.0};               // far corner, clear of the wall
    probe.points[2] = {3.25, 0.25};                   // cell center inside the wall
    const double loss = planner::collision_loss(probe, blocked);
    // the far corner cells still sit ~4 m from the wall: only the one
    // waypoint is inside the margin, distance 0 -> hinge = 1.0
    CHECK(loss == doctest::Approx(1.0).epsilon(1e-9));

    // off-grid waypoints contribute nothing
    sim::Trajectory outside;
    for (int i = 0; i < sim::Trajectory::kWaypoints; ++i)
        outside.points[i] = {20.0 + i, 20.0};
    CHECK(planner::collision_loss(outside, blocked) == 0.0);
}

TEST_CASE("collision loss gradient matches finite differences") {
    sim::GenConfig cfg;
    cfg.tag = decision::DecisionCategory::Decelerate;  // guarantees an obstacle
    const sim::Scene scene = sim::generate_scene(24, cfg);
    const auto dist = planner::SceneDistanceFields::from_scene(scene);

    // waypoints near but not on the obstacle, away from cell-boundary kinks
    Matrix waypoints = scene.expert.to_matrix();
    for (std::size_t r = 0; r < waypoints.rows(); ++r) waypoints(r, 1) += 0.1;
    Matrix* params[] = {&waypoints};
    auto f = [&](nn::Tape& t, std::span<const nn::Var> vars) {
        return planner::collision_loss(t, vars[0], dist);
    };
    CHECK(nn::grad_check(f, params, 1e-5) < 1e-4);
}

TEST_CASE("total loss: perfect plan scores zero, offsets score lambda_im * 0.25") {
    sim::GenConfig cfg;
    cfg.max_agents = 0;
    cfg.tag = decision::DecisionCategory::Forward;
    const sim::Scene scene = sim::generate_scene(25, cfg);
    const auto logic = decision::scripted_decision_maker(scene);
    const auto dist = planner::SceneDistanceFields::from_scene(scene);
    const planner::LossWeights w;
    const decision::RuleThresholds th;

    {
        nn::Tape tape;
        planner::LossTerms terms;
        nn::Var pred = tape.leaf(scene.expert.to_matrix());
        nn::Var loss = planner::total_loss(tape, pred, scene, dist, logic, w, true, th, &terms);
        CHECK(tape.scalar_value(loss) == 0.0);
        CHECK(terms.imitation == 0.0);
        CHECK(terms.collision == 0.0);
        CHECK(terms.consistency == 0.0);
    }
    {
        // constant (0.3, 0.4) offset:every waypoint squared error is 0.25; the
        // Forward margins hold, so only the imitation term fires
        nn::Tape tape;
        Matrix off = scene.expert.to_matrix();
        for (std::size_t r = 0; r < off.rows(); ++r) {
            off(r, 0) += 0.3;
            off(r, 1) += 0.4;
        }
        planner::LossTerms terms;
        nn::Var loss = planner::total_loss(tape, tape.leaf(off), scene, dist, logic, w, true, th,
                                           &terms);
        CHECK(terms.imitation == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(terms.consistency == 0.0);
        CHECK(tape.scalar_value(loss) == doctest::Approx(w.imitation * 0.25).epsilon(1e-12));
    }
}

TEST_CASE("full plan -> total_loss gradient check on small dims") {
    const text::Vocabulary vocab = corpus_vocab();
    planner::PlannerDims dims{8, 2, 8, 64};
    planner::PlannerParams params = planner::PlannerParams::seeded(vocab, dims, 3);
    sim::GenConfig cfg;
    cfg.tag = decision::DecisionCategory::TurnLeft;
    const sim::Scene scene = sim::generate_scene(26, cfg);
    const auto logic = decision::scripted_decision_maker(scene);
    const auto cues = planner::cues_from(logic);
    const auto dist = planner::SceneDistanceFields::from_scene(scene);
    const Matrix bev = text::bev_to_tokens(sim::rasterize_bev(scene));

    auto named = params.named_tensors();
    std::vector<Matrix*> tensor_ptrs;
    for (auto& [name, m] : named) tensor_ptrs.push_back(m);

    auto f = [&](nn::Tape& t, std::span<const nn::Var> vars) {
        const planner::PlannerVars pv = planner::planner_vars_from_span(vars, dims);
        nn::Var pred = planner::plan_traced(t, bev, cues, pv, params);
        return planner::total_loss(t, pred, scene, dist, logic, {1.0, 0.5, 0.2}, true,
                                   decision::RuleThresholds{}, nullptr);
    };
    nn::GradCheckOptions opt;
    opt.eps = 1e-5;
    opt.max_entries_per_param = 6;  // seeded subset keeps this test quick
    opt.seed = 99;
    CHECK(nn::grad_check(f, tensor_ptrs, opt) < 1e-4);
}

TEST_CASE("train: zero epochs leave seeded params, same seed gives same log") {
    const text::Vocabulary vocab = corpus_vocab();
    const auto dataset = tiny_dataset(8, 1234);

    planner::TrainConfig cfg;
    cfg.epochs = 0;
    cfg.dims = {8, 2, 16, 64};
    cfg.seed = 11;
    const auto result = planner::train(dataset, vocab, cfg);
    const auto fresh = planner::PlannerParams::seeded(vocab, cfg.dims, cfg.seed);
    const auto a = result.params.named_tensors();
    const auto b = fresh.named_tensors();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i].second == *b[i].second);
    CHECK(result.log.empty());

    cfg.epochs = 2;
    cfg.lr = 1e-3;
    const auto run1 = planner::train(dataset, vocab, cfg);
    const auto run2 = planner::train(dataset, vocab, cfg);
    REQUIRE(run1.log.size() == run2.log.size());
    for (std::size_t e = 0; e < run1.log.size(); ++e)
        CHECK(run1.log[e].total == run2.log[e].total);  // bit-identical
    const auto t1 = run1.params.named_tensors();
    const auto t2 = run2.params.named_tensors();
    for (std::size_t i = 0; i < t1.size(); ++i) CHECK(*t1[i].second == *t2[i].second);
}

TEST_CASE("train aborts with a diagnostic when the loss explodes") {
    const text::Vocabulary vocab = corpus_vocab();
    const auto dataset = tiny_dataset(4, 55);
    planner::TrainConfig cfg;
    cfg.epochs = 50;
    cfg.lr = 1e3;  // deliberately absurd
    cfg.dims = {8, 2, 16, 64};
    CHECK_THROWS_AS(planner::train(dataset, vocab, cfg), planner::NumericError);
}

TEST_CASE("checkpoints round-trip bit-exactly and validate their format") {
    const text::Vocabulary vocab = corpus_vocab();
    const auto params = planner::PlannerParams::seeded(vocab, {16, 4, 32, 64}, 17);
    const auto path = std::filesystem::temp_directory_path() / "dme_ckpt_test.dmep";
    planner::save_checkpoint(params, path);

    // magic bytes

    {
        std::ifstream in(path, std::ios::binary);
        char magic[4];
        in.read(magic, 4);
        CHECK(std::string(magic, 4) == "DMEP");
    }

    const auto loaded = planner::load_checkpoint(path, vocab);
    CHECK(loaded.dims.model_dim == 16);
    CHECK(loaded.dims.num_heads == 4);
    CHECK(loaded.dims.ffn_hidden == 32);
    const auto a = params.named_tensors();
    const auto b = loaded.named_tensors();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i].second == *b[i].second);

    // a truncated file is rejected
    {
        std::ofstream out(path, std::ios::binary);
        out << "DMEP";
    }
    CHECK_THROWS(planner::load_checkpoint(path, vocab));
    std::filesystem::remove(path);
}

TEST_CASE("ablation mode selects the text cues") {
    sim::GenConfig cfg;
    cfg.tag = decision::DecisionCategory::TurnRight;
    const sim::Scene scene = sim::generate_scene(27, cfg);
    const auto logic = decision::scripted_decision_maker(scene);

    const auto none = planner::select_cues(planner::AblationMode::executor_only, scene, logic);
    CHECK(none.gaze.empty());
    CHECK(none.decision.empty());

    const auto gt = planner::select_cues(planner::AblationMode::gt_text, scene, logic);
    CHECK(gt.decision == decision::decision_template(scene.tag));

    const auto dm = planner::select_cues(planner::AblationMode::dm_text, scene, logic);
    CHECK(dm.gaze == logic.gaze_text);
    CHECK(planner::consistency_active(planner::AblationMode::dm_text) == false);
    CHECK(planner::consistency_active(planner::AblationMode::dm_text_cl) == true);
}

TEST_SUITE_END();

// Longer regression: the canonical 64-scene training run. Lives in its own
// suite so the default unit pass stays fast.
TEST_SUITE_BEGIN("slow");

TEST_CASE("64 scenes, 300 epochs, lr 1e-2: imitation falls below 10% of epoch 1") {
    const text::Vocabulary vocab = corpus_vocab();
    const auto dataset = tiny_dataset(64, 7);
    planner::TrainConfig cfg;
    cfg.epochs = 300;
    cfg.lr = 1e-2;
    cfg.momentum = 0.0;
    cfg.seed = 7;
    cfg.ablation = planner::AblationMode::dm_text;
    cfg.dims = {8, 2, 16, 64};  // compact dims keep the regression tractable
    const auto result = planner::train(dataset, vocab, cfg);
    REQUIRE(result.log.size() == 300);
    CHECK(result.log.back().imitation < 0.1 * result.log.front().imitation);
}

TEST_SUITE_END();
