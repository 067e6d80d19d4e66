#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "dme/decision/category.hpp"
#include "dme/sim/types.hpp"

namespace dme::decision {

// The four texts the Decision-Maker emits for a scene, plus the maneuver
// class its decision text realizes.
struct DriverLogicOutput {
    std::string gaze_text;
    std::string description_text;
    std::string reasoning_text;
    std::string decision_text;
    DecisionCategory category = DecisionCategory::Forward;
};

// Canonical first-person decision sentence per category. Every template
// keyword-maps back to its own category (category_from_text inverts this).
inline std::string decision_template(DecisionCategory c) {
    switch (c) {
        case DecisionCategory::Forward:
            return "I will keep moving forward at my current speed.";
        case DecisionCategory::Accelerate:
            return "I will accelerate to a higher cruising speed.";
        case DecisionCategory::Decelerate:
            return "I will slow down to keep a safe gap.";
        case DecisionCategory::Stop:
            return "I will stop before the obstacle ahead.";
        case DecisionCategory::TurnLeft:
            return "I will turn left at the junction ahead.";
        case DecisionCategory::TurnRight:
            return "I will turn right at the junction ahead.";
        case DecisionCategory::LaneChangeLeft:
            return "I will change to the left lane.";
        case DecisionCategory::LaneChangeRight:
            return "I will change to the right lane.";
    }
    throw std::logic_error("decision_template: unreachable");
}

namespace detail {

inline std::string format_m(double v) {
    std::ostringstream out;
    out.precision(1);
    out << std::fixed << v;
    return out.str();
}

// sector phrase for an agent position relative to the ego lane
inline std::string sector_phrase(const sim::Scene& scene, const sim::Agent& a) {
    const bool in_lane = std::abs(a.position.y) <= scene.lane.width / 2.0;
    std::string where;
    if (a.position.x >= 1.0)
        where = "ahead";
    else if (a.position.x <= -1.0)
        where = "behind";
    else
        where = "beside me";
    if (in_lane && where == "ahead") return "ahead in my lane";
    if (where == "beside me") return a.position.y > 0 ? "beside me on the left" : "beside me on the right";
    if (!in_lane) where += a.position.y > 0 ? " on the left" : " on the right";
    return where;
}

inline const sim::Agent* nearest_agent(const sim::Scene& scene) {
    const sim::Agent* best = nullptr;
    double best_d = 1e18;
    for (const sim::Agent& a : scene.agents) {
        const double d = std::hypot(a.position.x, a.position.y);
        if (d < best_d) {
            best_d = d;
            best = &a;
        }
    }
    return best;
}

inline std::string reasoning_template(DecisionCategory c) {
    switch (c) {
        case DecisionCategory::Forward:
            return "The road in front of me is clear, so I see no reason to change anything.";
        case DecisionCategory::Accelerate:
            return "Traffic in front of me is clearing, so it is safe to go faster.";
        case DecisionCategory::Decelerate:
            return "The vehicle in front of me is closing in, so I need more distance.";
        case DecisionCategory::Stop:
            return "My path is blocked a short way in front of me, so I must come to a halt.";
        case DecisionCategory::TurnLeft:
            return "My route bends to the left at the junction in front of me.";
        case DecisionCategory::TurnRight:
            return "My route bends to the right at the junction in front of me.";
        case DecisionCategory::LaneChangeLeft:
            return "The left lane is open and moving better than mine.";
        case DecisionCategory::LaneChangeRight:
            return "The right lane is open and moving better than mine.";
    }
    throw std::logic_error("reasoning_template: unreachable");
}

} // namespace detail

// Deterministic template filling from the scene: the stand-in for the LVLM
// Decision-Maker. Its category always equals the scene's scenario tag.
inline DriverLogicOutput scripted_decision_maker(const sim::Scene& scene) {
    DriverLogicOutput out;
    out.category = scene.tag;
    out.decision_text = decision_template(scene.tag);
    out.reasoning_text = detail::reasoning_template(scene.tag);

    if (const sim::Agent* a = detail::nearest_agent(scene)) {
        out.gaze_text = "I am watching the vehicle " + detail::sector_phrase(scene, *a) +
                        ", about " + detail::format_m(std::hypot(a->position.x, a->position.y)) +
                        " meters away.";
    } else {
        out.gaze_text = "I am scanning the empty road in front of me.";
    }
    out.description_text = "I am in a straight lane " + detail::format_m(scene.lane.width) +
                           " meters wide, moving at " + detail::format_m(scene.ego.speed) +
                           " meters per second, with " + std::to_string(scene.agents.size()) +
                           " other vehicles in view.";
    return out;
}

// Idealized annotation texts derived directly from the scenario tag; the
// gt_text ablation feeds these instead of Decision-Maker output.
inline DriverLogicOutput ground_truth_logic(const sim::Scene& scene) {
    DriverLogicOutput out;
    out.category = scene.tag;
    out.decision_text = decision_template(scene.tag);
    switch (scene.tag) {
        case DecisionCategory::TurnLeft:
            out.gaze_text = "I am looking into the opening on my left.";
            break;
        case DecisionCategory::TurnRight:
            out.gaze_text = "I am looking into the opening on my right.";
            break;
        case DecisionCategory::LaneChangeLeft:
            out.gaze_text = "I am checking the left lane and my mirror.";
            break;
        case DecisionCategory::LaneChangeRight:
            out.gaze_text = "I am checking the right lane and my mirror.";
            break;
        default:
            out.gaze_text = "I am looking at the road straight in front of me.";
            break;
    }
    out.description_text = "A straight lane with " + std::to_string(scene.agents.size()) +
                           " vehicles around me.";
    out.reasoning_text = detail::reasoning_template(scene.tag);
    return out;
}

} // namespace dme::decision
