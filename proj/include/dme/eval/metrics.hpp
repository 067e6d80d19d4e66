#pragma once

#include <optional>
#include <span>

#include "dme/decision/driver_logic.hpp"
#include "dme/decision/rules.hpp"
#include "dme/sim/rasterize.hpp"

namespace dme::eval {

// one value per evaluation horizon plus their arithmetic mean
struct HorizonValues {
    double h1 = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;
    double avg = 0.0;
};

struct PlanMetrics {
    HorizonValues l2;                     // meters
    HorizonValues collision;              // percent, cumulative up to horizon
    std::optional<double> mismatch_rate;  // percent; absent for expert-only fixtures
};

// Euclidean displacement at the 1 s / 2 s / 3 s waypoints (indices 1, 3, 5).
inline HorizonValues l2_at_horizons(const sim::Trajectory& pred, const sim::Trajectory& expert) {
    HorizonValues v;
    const auto d = [&](int idx) { return sim::distance(pred.points[idx], expert.points[idx]); };
    v.h1 = d(sim::Trajectory::kHorizonIndices[0]);
    v.h2 = d(sim::Trajectory::kHorizonIndices[1]);
    v.h3 = d(sim::Trajectory::kHorizonIndices[2]);
    v.avg = (v.h1 + v.h2 + v.h3) / 3.0;
    return v;
}

struct EvalCase {
    const sim::Trajectory* pred = nullptr;
    const sim::Scene* scene = nullptr;
};

// A trajectory collides at horizon h when any waypoint with t <= h sits in
// an occupied cell of the matching-time occupancy grid; rates are percent
// of trajectories, cumulative in the horizon.
inline HorizonValues collision_rate(std::span<const EvalCase> cases) {
    if (cases.empty()) throw std::invalid_argument("collision_rate: no cases");
    static constexpr double kHorizons[3] = {1.0, 2.0, 3.0};
    int counts[3] = {0, 0, 0};
    for (const EvalCase& c : cases)
        for (int h = 0; h < 3; ++h)
            if (sim::trajectory_collides(*c.scene, *c.pred, kHorizons[h])) ++counts[h];
    const double n = static_cast<double>(cases.size());
    HorizonValues v;
    v.h1 = 100.0 * counts[0] / n;
    v.h2 = 100.0 * counts[1] / n;
    v.h3 = 100.0 * counts[2] / n;
    v.avg = (v.h1 + v.h2 + v.h3) / 3.0;
    return v;
}

// percent of trajectories whose classified maneuver differs from the
// commanded decision category
inline double decision_mismatch_rate(std::span<const sim::Trajectory> preds,
                                     std::span<const sim::EgoStatus> egos,
                                     std::span<const decision::DecisionCategory> commanded,
                                     const decision::RuleThresholds& th = {}) {
    if (preds.size() != commanded.size() || preds.size() != egos.size())
        throw std::invalid_argument("decision_mismatch_rate: length mismatch: " +
                                    std::to_string(preds.size()) + " trajectories vs " +
                                    std::to_string(commanded.size()) + " decisions");
    if (preds.empty()) return 0.0;
    int mismatched = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (decision::classify_trajectory(preds[i], egos[i], th) != commanded[i]) ++mismatched;
    return 100.0 * mismatched / static_cast<double>(preds.size());
}

} // namespace dme::eval
