#pragma once

#include <cmath>
#include <numbers>

#include "dme/decision/category.hpp"
#include "dme/sim/types.hpp"

namespace dme::decision {

// Rule thresholds for the trajectory classifier. The defaults are the
// repo-wide calibration: experts are generated with clear margins against
// them.
struct RuleThresholds {
    double turn_heading = 15.0 * std::numbers::pi / 180.0;  // rad of heading change over 3 s
    double lateral_lc = 1.5;                                // m of final lateral offset
    double accel_ratio = 1.25;                              // v_end / v0 above -> Accelerate
    double decel_ratio = 0.8;                               // v_end / v0 below -> Decelerate
    double v_stop = 0.5;                                    // m/s final speed below -> Stop

    void validate() const {
        if (!(turn_heading > 0 && lateral_lc > 0 && v_stop > 0))
            throw std::invalid_argument("RuleThresholds: thresholds must be positive");
        if (!(accel_ratio > 1.0 && decel_ratio < 1.0 && decel_ratio > 0.0))
            throw std::invalid_argument("RuleThresholds: need accel_ratio > 1 > decel_ratio > 0");
    }
};

// The three quantities the rules discriminate on.
struct TrajectoryDiscriminants {
    double heading_change = 0.0;  // final-segment heading minus initial heading, wrapped (rad)
    double lateral = 0.0;         // y of final waypoint (m, +left)
    double end_speed = 0.0;       // final-segment speed (m/s)
};

inline double wrap_angle(double a) {
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

inline TrajectoryDiscriminants discriminants(const sim::Trajectory& traj,
                                             const sim::EgoStatus& ego) {
    const sim::Vec2& last = traj.points[sim::Trajectory::kWaypoints - 1];
    const sim::Vec2& prev = traj.points[sim::Trajectory::kWaypoints - 2];
    const double dx = last.x - prev.x;
    const double dy = last.y - prev.y;
    TrajectoryDiscriminants d;
    d.heading_change = wrap_angle(std::atan2(dy, dx) - ego.heading);
    d.lateral = last.y;
    d.end_speed = std::hypot(dx, dy) / sim::Trajectory::kDt;
    return d;
}

// Precedence: Stop > TurnLeft/Right > LaneChangeLeft/Right >
// Accelerate/Decelerate > Forward. Total over all finite trajectories.
inline DecisionCategory classify_trajectory(const sim::Trajectory& traj,
                                            const sim::EgoStatus& ego,
                                            const RuleThresholds& th = {}) {
    const TrajectoryDiscriminants d = discriminants(traj, ego);
    if (d.end_speed < th.v_stop) return DecisionCategory::Stop;
    if (d.heading_change > th.turn_heading) return DecisionCategory::TurnLeft;
    if (d.heading_change < -th.turn_heading) return DecisionCategory::TurnRight;
    if (d.lateral > th.lateral_lc) return DecisionCategory::LaneChangeLeft;
    if (d.lateral < -th.lateral_lc) return DecisionCategory::LaneChangeRight;
    if (d.end_speed > th.accel_ratio * ego.speed) return DecisionCategory::Accelerate;
    if (d.end_speed < th.decel_ratio * ego.speed) return DecisionCategory::Decelerate;
    return DecisionCategory::Forward;
}

} // namespace dme::decision
