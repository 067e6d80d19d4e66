#pragma once

#include <optional>

#include "dme/decision/driver_logic.hpp"
#include "dme/planner/params.hpp"
#include "dme/text/fusion.hpp"

namespace dme::planner {

// Resolved text inputs for one planning call. Empty strings encode as the
// EMPTY token, which is how the executor-only ablation silences the cues.
struct TextCues {
    std::string gaze;
    std::string description;
    std::string decision;
};

inline TextCues cues_from(const decision::DriverLogicOutput& logic) {
    return {logic.gaze_text, logic.description_text, logic.decision_text};
}

// Table-3 ablation axes: which cues feed the planner and whether the
// consistency penalty is active during training.
enum class AblationMode { executor_only, gt_text, dm_text, dm_text_cl };

inline const std::string& ablation_name(AblationMode m) {
    static const std::array<std::string, 4> names = {"executor_only", "gt_text", "dm_text",
                                                     "dm_text_cl"};
    return names[static_cast<std::size_t>(m)];
}

inline std::optional<AblationMode> parse_ablation(const std::string& name) {
    for (AblationMode m : {AblationMode::executor_only, AblationMode::gt_text,
                           AblationMode::dm_text, AblationMode::dm_text_cl})
        if (ablation_name(m) == name) return m;
    return std::nullopt;
}

inline bool consistency_active(AblationMode m) { return m == AblationMode::dm_text_cl; }

inline TextCues select_cues(AblationMode mode, const sim::Scene& scene,
                            const decision::DriverLogicOutput& dm_logic) {
    switch (mode) {
        case AblationMode::executor_only: return {};
        case AblationMode::gt_text: return cues_from(decision::ground_truth_logic(scene));
        case AblationMode::dm_text:
        case AblationMode::dm_text_cl: return cues_from(dm_logic);
    }
    throw std::logic_error("select_cues: unreachable");
}

// Tape handles for every trainable tensor, in named_tensors() order.
struct PlannerVars {
    nn::Var embedding;
    nn::Var bev_projection;
    nn::AttentionVars occ_fusion;
    nn::AttentionVars plan_fusion;
    nn::Var pool_query;
    nn::Var ffn_w1, ffn_b1, ffn_w2, ffn_b2;

    std::vector<nn::Var> in_tensor_order() const {
        std::vector<nn::Var> out{embedding, bev_projection};
        auto attention = [&out](const nn::AttentionVars& a) {
            for (std::size_t h = 0; h < a.wq.size(); ++h) {
                out.push_back(a.wq[h]);
                out.push_back(a.wk[h]);
                out.push_back(a.wv[h]);
            }
            out.push_back(a.wo);
        };
        attention(occ_fusion);
        attention(plan_fusion);
        out.insert(out.end(), {pool_query, ffn_w1, ffn_b1, ffn_w2, ffn_b2});
        return out;
    }
};

inline PlannerVars register_planner(nn::Tape& tape, const PlannerParams& p) {
    PlannerVars v;
    v.embedding = tape.leaf(p.encoder.embedding);
    v.bev_projection = tape.leaf(p.bev_projection);
    v.occ_fusion = nn::register_attention(tape, p.occ_fusion);
    v.plan_fusion = nn::register_attention(tape, p.plan_fusion);
    v.pool_query = tape.leaf(p.pool_query);
    v.ffn_w1 = tape.leaf(p.ffn_w1);
    v.ffn_b1 = tape.leaf(p.ffn_b1);
    v.ffn_w2 = tape.leaf(p.ffn_w2);
    v.ffn_b2 = tape.leaf(p.ffn_b2);
    return v;
}

// Rebuilds a PlannerVars view over leaves created by grad_check in
// named_tensors() order.
inline PlannerVars planner_vars_from_span(std::span<const nn::Var> vars, const PlannerDims& dims) {
    PlannerVars v;
    std::size_t i = 0;
    v.embedding = vars[i++];
    v.bev_projection = vars[i++];
    auto attention = [&](nn::AttentionVars& a) {
        for (std::size_t h = 0; h < dims.num_heads; ++h) {
            a.wq.push_back(vars[i++]);
            a.wk.push_back(vars[i++]);
            a.wv.push_back(vars[i++]);
        }
        a.wo = vars[i++];
    };
    attention(v.occ_fusion);
    attention(v.plan_fusion);
    v.pool_query = vars[i++];
    v.ffn_w1 = vars[i++];
    v.ffn_b1 = vars[i++];
    v.ffn_w2 = vars[i++];
    v.ffn_b2 = vars[i++];
    return v;
}

// The planning pipeline: project BEV channels to model dim, fuse with
// T_occ, fuse with T_planner, attention-pool with the query vector,
// feed-forward to 6 cumulative displacements, prefix-sum into waypoints.
inline nn::Var plan_traced(nn::Tape& tape, const nn::Matrix& bev_feature_tokens,
                           const TextCues& cues, const PlannerVars& vars,
                           const PlannerParams& params) {
    const auto& vocab = params.vocab;
    nn::Var tokens = tape.matmul(tape.leaf(bev_feature_tokens), vars.bev_projection);

    nn::Var t_occ = text::build_occ_text(tape, cues.gaze, cues.description, vocab,
                                         vars.embedding, params.encoder);
    nn::Var t_planner = text::encode_text(tape, vocab.encode(cues.decision), vars.embedding,
                                          params.encoder);

    nn::Var fused = text::logical_fuse(tape, tokens, t_occ, vars.occ_fusion);
    fused = text::logical_fuse(tape, fused, t_planner, vars.plan_fusion);

    // attention pooling over the H*W tokens
    const double scale = 1.0 / std::sqrt(static_cast<double>(params.dims.model_dim));
    nn::Var scores = tape.scale(tape.matmul(fused, tape.transpose(vars.pool_query)), scale);
    nn::Var weights = tape.softmax_rows(tape.transpose(scores));  // 1 x H*W
    nn::Var pooled = tape.matmul(weights, fused);                 // 1 x d

    nn::Var hidden = tape.relu(tape.add(tape.matmul(pooled, vars.ffn_w1), vars.ffn_b1));
    nn::Var flat = tape.add(tape.matmul(hidden, vars.ffn_w2), vars.ffn_b2);  // 1 x 12
    nn::Var displacements = tape.reshape(flat, sim::Trajectory::kWaypoints, 2);

    // cumulative sum over rows via a constant lower-triangular map
    nn::Matrix lower(sim::Trajectory::kWaypoints, sim::Trajectory::kWaypoints);
    for (std::size_t r = 0; r < lower.rows(); ++r)
        for (std::size_t c = 0; c <= r; ++c) lower(r, c) = 1.0;
    return tape.matmul(tape.leaf(std::move(lower)), displacements);
}

// Pure inference entry point: grid + optional Decision-Maker output.
inline sim::Trajectory plan(const sim::BevGrid& grid,
                            const std::optional<decision::DriverLogicOutput>& logic,
                            const PlannerParams& params) {
    nn::Tape tape;
    PlannerVars vars = register_planner(tape, params);
    const TextCues cues = logic ? cues_from(*logic) : TextCues{};
    nn::Var out = plan_traced(tape, text::bev_to_tokens(grid), cues, vars, params);
    return sim::Trajectory::from_matrix(tape.value(out));
}

} // namespace dme::planner
