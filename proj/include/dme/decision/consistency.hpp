#pragma once

#include <span>

#include "dme/decision/rules.hpp"
#include "dme/nn/tape.hpp"

namespace dme::decision {

namespace detail {

// Discriminants of a 6x2 waypoint matrix on the tape, each a 1x1 node.
struct TracedDiscriminants {
    nn::Var heading_change;
    nn::Var lateral;
    nn::Var end_speed;
};

inline TracedDiscriminants traced_discriminants(nn::Tape& tape, nn::Var traj,
                                                const sim::EgoStatus& ego) {
    const std::size_t n = sim::Trajectory::kWaypoints;
    nn::Var last = tape.slice_rows(traj, n - 1, 1);
    nn::Var prev = tape.slice_rows(traj, n - 2, 1);
    nn::Var seg = tape.sub(last, prev);
    nn::Var dx = tape.slice_cols(seg, 0, 1);
    nn::Var dy = tape.slice_cols(seg, 1, 1);
    TracedDiscriminants d;
    d.heading_change = tape.sub(tape.atan2(dy, dx), tape.scalar(ego.heading));
    d.lateral = tape.slice_cols(last, 1, 1);
    nn::Var sq = tape.add(tape.hadamard(dx, dx), tape.hadamard(dy, dy));
    d.end_speed = tape.scale(tape.sqrt_eltwise(sq), 1.0 / sim::Trajectory::kDt);
    return d;
}

// max(0, threshold - x)
inline nn::Var hinge_below(nn::Tape& tape, nn::Var x, double threshold) {
    return tape.relu(tape.sub(tape.scalar(threshold), x));
}

// max(0, x - threshold)
inline nn::Var hinge_above(nn::Tape& tape, nn::Var x, double threshold) {
    return tape.relu(tape.sub(x, tape.scalar(threshold)));
}

} // namespace detail

// Differentiable hinge surrogate on the rule margins: zero exactly when the
// trajectory satisfies every rule that makes classify_trajectory return
// `decision` (including the precedence guards), positive otherwise.
// Piecewise-differentiable; subgradient 0 at the hinge kinks.
inline nn::Var consistency_penalty(nn::Tape& tape, nn::Var traj, DecisionCategory decision,
                                   const sim::EgoStatus& ego, const RuleThresholds& th = {}) {
    using detail::hinge_above;
    using detail::hinge_below;
    const auto d = detail::traced_discriminants(tape, traj, ego);
    const double v0 = ego.speed;

    nn::Var not_stop = hinge_below(tape, d.end_speed, th.v_stop);
    auto within_turn_band = [&] {
        return tape.add(hinge_above(tape, d.heading_change, th.turn_heading),
                        hinge_below(tape, d.heading_change, -th.turn_heading));
    };
    auto within_lane_band = [&] {
        return tape.add(hinge_above(tape, d.lateral, th.lateral_lc),
                        hinge_below(tape, d.lateral, -th.lateral_lc));
    };

    switch (decision) {
        case DecisionCategory::Stop:
            return hinge_above(tape, d.end_speed, th.v_stop);
        case DecisionCategory::TurnLeft:
            return tape.add(not_stop, hinge_below(tape, d.heading_change, th.turn_heading));
        case DecisionCategory::TurnRight:
            return tape.add(not_stop, hinge_above(tape, d.heading_change, -th.turn_heading));
        case DecisionCategory::LaneChangeLeft:
            return tape.add(tape.add(not_stop, within_turn_band()),
                            hinge_below(tape, d.lateral, th.lateral_lc));
        case DecisionCategory::LaneChangeRight:
            return tape.add(tape.add(not_stop, within_turn_band()),
                            hinge_above(tape, d.lateral, -th.lateral_lc));
        case DecisionCategory::Accelerate:
            return tape.add(tape.add(tape.add(not_stop, within_turn_band()), within_lane_band()),
                            hinge_below(tape, d.end_speed, th.accel_ratio * v0));
        case DecisionCategory::Decelerate:
            return tape.add(tape.add(tape.add(not_stop, within_turn_band()), within_lane_band()),
                            hinge_above(tape, d.end_speed, th.decel_ratio * v0));
        case DecisionCategory::Forward:
            return tape.add(
                tape.add(tape.add(tape.add(not_stop, within_turn_band()), within_lane_band()),
                         hinge_above(tape, d.end_speed, th.accel_ratio * v0)),
                hinge_below(tape, d.end_speed, th.decel_ratio * v0));
    }
    throw std::logic_error("consistency_penalty: unreachable");
}

inline double consistency_penalty(const sim::Trajectory& traj, DecisionCategory decision,
                                  const sim::EgoStatus& ego, const RuleThresholds& th = {}) {
    nn::Tape tape;
    nn::Var t = tape.leaf(traj.to_matrix());
    return tape.scalar_value(consistency_penalty(tape, t, decision, ego, th));
}

} // namespace dme::decision
