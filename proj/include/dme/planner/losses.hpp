#pragma once

#include <array>

#include "dme/decision/consistency.hpp"
#include "dme/planner/plan.hpp"
#include "dme/sim/rasterize.hpp"

namespace dme::planner {

struct LossWeights {
    double imitation = 1.0;    // lambda_im
    double collision = 0.5;    // lambda_col
    double consistency = 0.2;  // lambda_cons

    void validate() const {
        if (imitation < 0 || collision < 0 || consistency < 0)
            throw std::invalid_argument("LossWeights: weights must be >= 0");
    }
};

inline constexpr double kCollisionMargin = 1.0;  // m

// Distance transforms of the scene's occupancy lattice, one per waypoint
// time. Precomputed once per scene; the collision loss samples them.
struct SceneDistanceFields {
    std::array<nn::Matrix, sim::BevGrid::kTimeSteps> fields;

    static SceneDistanceFields from_scene(const sim::Scene& scene) {
        SceneDistanceFields out;
        for (int k = 0; k < sim::BevGrid::kTimeSteps; ++k)
            out.fields[k] = sim::distance_transform(scene.occupancy[k]);
        return out;
    }
};

// Soft collision surrogate: hinge on the bilinearly sampled clearance at
// each waypoint, margin 1 m. Off-grid waypoints contribute 0.
inline nn::Var collision_loss(nn::Tape& tape, nn::Var traj, const SceneDistanceFields& dist) {
    // cell-center lattice offset; sample_grid sees u = x/cell + offset
    const double offset = sim::BevGrid::kEgoRow - 0.5;
    nn::Var total = tape.scalar(0.0);
    for (int i = 0; i < sim::Trajectory::kWaypoints; ++i) {
        const int k = sim::occupancy_index_of(sim::Trajectory::time_of(i));
        nn::Var point = tape.slice_rows(traj, static_cast<std::size_t>(i), 1);
        // outside the grid the sampled clearance is huge, so the hinge is 0
        nn::Var clearance = tape.sample_grid(dist.fields[k], point, sim::BevGrid::kCell, offset,
                                             1e6);
        nn::Var hinge = tape.relu(tape.sub(tape.scalar(kCollisionMargin), clearance));
        total = tape.add(total, hinge);
    }
    return total;
}

inline double collision_loss(const sim::Trajectory& traj, const sim::Scene& scene) {
    nn::Tape tape;
    const auto dist = SceneDistanceFields::from_scene(scene);
    return tape.scalar_value(collision_loss(tape, tape.leaf(traj.to_matrix()), dist));
}

struct LossTerms {
    double imitation = 0.0;
    double collision = 0.0;
    double consistency = 0.0;  // unweighted penalty value, logged even when inactive
    double total = 0.0;
};

// lambda_im * mean_k ||pred_k - expert_k||^2 + lambda_col * collision +
// lambda_cons * consistency. The consistency term only enters the graph in
// the dm_text_cl ablation; its raw value is still reported for the log.
inline nn::Var total_loss(nn::Tape& tape, nn::Var pred, const sim::Scene& scene,
                          const SceneDistanceFields& dist,
                          const decision::DriverLogicOutput& logic, const LossWeights& w,
                          bool use_consistency, const decision::RuleThresholds& thresholds,
                          LossTerms* terms = nullptr) {
    nn::Var expert = tape.leaf(scene.expert.to_matrix());
    nn::Var diff = tape.sub(pred, expert);
    nn::Var imitation = tape.scale(tape.sum_all(tape.hadamard(diff, diff)),
                                   1.0 / sim::Trajectory::kWaypoints);
    nn::Var collision = collision_loss(tape, pred, dist);

    nn::Var loss = tape.add(tape.scale(imitation, w.imitation), tape.scale(collision, w.collision));
    double consistency_value = 0.0;
    if (use_consistency) {
        nn::Var consistency =
            decision::consistency_penalty(tape, pred, logic.category, scene.ego, thresholds);
        consistency_value = tape.scalar_value(consistency);
        loss = tape.add(loss, tape.scale(consistency, w.consistency));
    } else {
        consistency_value = decision::consistency_penalty(
            sim::Trajectory::from_matrix(tape.value(pred)), logic.category, scene.ego, thresholds);
    }
    if (terms) {
        terms->imitation = tape.scalar_value(imitation);
        terms->collision = tape.scalar_value(collision);
        terms->consistency = consistency_value;
        terms->total = tape.scalar_value(loss);
    }
    return loss;
}

} // namespace dme::planner
