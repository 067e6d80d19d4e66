#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dme/decision/rules.hpp"
#include "dme/sim/rasterize.hpp"
#include "dme/sim/types.hpp"
#include "dme/util/rng.hpp"

namespace dme::sim {

struct GenConfig {
    int max_agents = 4;                                      // 0..8
    std::optional<decision::DecisionCategory> tag;           // nullopt = random per scene
    double speed_min = 2.5;                                  // m/s
    double speed_max = 6.0;
    int max_attempts = 100;
    decision::RuleThresholds thresholds;

    void validate() const {
        if (max_agents < 0 || max_agents > 8)
            throw std::invalid_argument("GenConfig: max_agents must be in [0, 8]");
        if (!(speed_min > 0.0 && speed_max >= speed_min))
            throw std::invalid_argument("GenConfig: bad speed range");
        thresholds.validate();
    }
};

struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Constant-turn-rate + speed-profile motion. Longitudinal speed is
// v0 + accel*t clamped at zero; lane changes add a smoothstep lateral
// shift on top of straight motion.
struct MotionProfile {
    double v0 = 0.0;
    double accel = 0.0;
    double turn_rate = 0.0;   // rad/s, +left
    double lane_shift = 0.0;  // m, +left, reached at t = 3 s
};

inline double arc_length(const MotionProfile& p, double t) {
    double te = t;
    if (p.accel < 0.0) te = std::min(te, p.v0 / -p.accel);  // clamp once stopped
    return p.v0 * te + 0.5 * p.accel * te * te;
}

inline Vec2 profile_position(const MotionProfile& p, double t) {
    if (p.turn_rate != 0.0) {
        const double w = p.turn_rate;
        return {p.v0 / w * std::sin(w * t), p.v0 / w * (1.0 - std::cos(w * t))};
    }
    const double u = std::clamp(t / 3.0, 0.0, 1.0);
    const double smooth = u * u * (3.0 - 2.0 * u);
    return {arc_length(p, t), p.lane_shift * smooth};
}

inline Trajectory profile_trajectory(const MotionProfile& p) {
    Trajectory traj;
    for (int i = 0; i < Trajectory::kWaypoints; ++i)
        traj.points[i] = profile_position(p, Trajectory::time_of(i));
    return traj;
}

// Parameter ranges are chosen so the resulting trajectory classifies as the
// requested category with a clear margin against the default thresholds.
inline MotionProfile draw_profile(decision::DecisionCategory tag, double v0, Rng& rng) {
    using decision::DecisionCategory;
    MotionProfile p;
    p.v0 = v0;
    constexpr double deg = std::numbers::pi / 180.0;
    switch (tag) {
        case DecisionCategory::Forward:
            break;
        case DecisionCategory::Accelerate:
            p.accel = rng.uniform(0.5, 0.8) * v0 / 3.0;
            break;
        case DecisionCategory::Decelerate:
            p.accel = (rng.uniform(0.5, 0.6) - 1.0) * v0 / 3.0;
            break;
        case DecisionCategory::Stop:
            p.accel = -v0 / rng.uniform(1.2, 2.0);
            break;
        case DecisionCategory::TurnLeft:
            p.turn_rate = rng.uniform(25.0, 40.0) * deg / 3.0;
            break;
        case DecisionCategory::TurnRight:
            p.turn_rate = -rng.uniform(25.0, 40.0) * deg / 3.0;
            break;
        case DecisionCategory::LaneChangeLeft:
            p.lane_shift = rng.uniform(2.2, 3.2);
            break;
        case DecisionCategory::LaneChangeRight:
            p.lane_shift = -rng.uniform(2.2, 3.2);
            break;
    }
    return p;
}

inline bool clear_of_expert(const Agent& agent, const Trajectory& expert) {
    const double clearance = std::max(agent.half_x, agent.half_y) + 1.0;
    for (int k = 0; k < BevGrid::kTimeSteps; ++k) {
        const double t = occupancy_time_of(k);
        const Vec2 ego = k == 0 ? Vec2{0.0, 0.0} : expert.points[k - 1];
        if (distance(agent.position_at(t), ego) < clearance) return false;
    }
    return true;
}

inline decision::DecisionCategory pick_category(Rng& rng) {
    return decision::all_categories()[static_cast<std::size_t>(
        rng.uniform_int(0, decision::kCategoryCount - 1))];
}

} // namespace detail

// Deterministic for a fixed seed. The expert trajectory realizes the
// scenario tag by construction; agent layouts that violate the tag or
// collide with the expert are rejection-sampled away.
inline Scene generate_scene(std::uint64_t seed, const GenConfig& cfg = {}) {
    cfg.validate();
    Rng rng(seed);

    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        Scene scene;
        scene.seed = seed;
        scene.id = "scene-" + std::to_string(seed);
        scene.tag = cfg.tag.value_or(detail::pick_category(rng));
        scene.lane.centerline = {{-BevGrid::kExtent, 0.0}, {BevGrid::kExtent, 0.0}};
        scene.lane.width = 3.5;

        const double v0 = rng.uniform(cfg.speed_min, cfg.speed_max);
        scene.ego = EgoStatus{v0, 0.0};
        const detail::MotionProfile profile = detail::draw_profile(scene.tag, v0, rng);
        scene.expert = detail::profile_trajectory(profile);

        int agent_count = cfg.max_agents > 0 ? rng.uniform_int(0, cfg.max_agents) : 0;
        const bool wants_lead = (scene.tag == decision::DecisionCategory::Decelerate ||
                                 scene.tag == decision::DecisionCategory::Stop) &&
                                cfg.max_agents > 0;
        if (wants_lead) agent_count = std::max(agent_count, 1);

        bool layout_ok = true;
        for (int i = 0; i < agent_count && layout_ok; ++i) {
            Agent a;
            a.half_x = rng.uniform(0.6, 1.1);
            a.half_y = rng.uniform(0.4, 0.8);
            if (i == 0 && wants_lead) {
                // slower vehicle ahead in the ego lane, placed past the
                // expert's closest approach
                if (scene.tag == decision::DecisionCategory::Stop) {
                    const double stop_dist = detail::arc_length(profile, 3.0);
                    a.position = {stop_dist + a.half_x + rng.uniform(1.2, 2.2), 0.0};
                    a.velocity = {0.0, 0.0};
                } else {
                    a.position = {0.85 * v0 + a.half_x + rng.uniform(1.2, 2.2), 0.0};
                    a.velocity = {0.5 * v0, 0.0};
                }
                scene.agents.push_back(a);
                continue;
            }
            bool placed = false;
            for (int tries = 0; tries < 20 && !placed; ++tries) {
                a.position = {rng.uniform(-7.5, 7.5), rng.uniform(-7.5, 7.5)};
                if (rng.chance(0.7))
                    a.velocity = {rng.uniform(-2.0, 4.0), rng.uniform(-0.3, 0.3)};
                else
                    a.velocity = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
                placed = detail::clear_of_expert(a, scene.expert);
            }
            if (!placed) {
                layout_ok = false;
                break;
            }
            scene.agents.push_back(a);
        }
        if (!layout_ok) continue;

        for (int k = 0; k < BevGrid::kTimeSteps; ++k)
            scene.occupancy[k] = occupancy_at(scene, occupancy_time_of(k));

        if (decision::classify_trajectory(scene.expert, scene.ego, cfg.thresholds) != scene.tag)
            continue;
        if (trajectory_collides(scene, scene.expert)) continue;
        int r, c;
        if (BevGrid::world_to_cell(0.0, 0.0, r, c) &&
            scene.occupancy[0][r * BevGrid::kW + c])
            continue;
        return scene;
    }
    throw GenerationError("generate_scene: no feasible scene for tag '" +
                          (cfg.tag ? decision::category_name(*cfg.tag) : std::string("random")) +
                          "' after " + std::to_string(cfg.max_attempts) + " attempts (seed " +
                          std::to_string(seed) + ")");
}

} // namespace dme::sim
