#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dme/nn/attention.hpp"
#include "dme/sim/types.hpp"
#include "dme/text/encoder.hpp"
#include "dme/text/vocab.hpp"

namespace dme::planner {

struct PlannerDims {
    std::size_t model_dim = 32;
    std::size_t num_heads = 4;
    std::size_t ffn_hidden = 64;
    std::size_t max_tokens = 128;
};

// All trainable state of the Executor's planning head. The text encoder
// (embedding table) lives here too; the vocabulary travels beside the
// checkpoint as its own file.
struct PlannerParams {
    PlannerDims dims;
    text::Vocabulary vocab;
    text::EncoderParams encoder;       // embedding trainable, positions fixed
    nn::Matrix bev_projection;         // C x d channel projection
    nn::AttentionParams occ_fusion;    // LogicalFusioner fed with T_occ
    nn::AttentionParams plan_fusion;   // LogicalFusioner fed with T_planner
    nn::Matrix pool_query;             // 1 x d attention-pool query
    nn::Matrix ffn_w1, ffn_b1;         // d x hidden, 1 x hidden
    nn::Matrix ffn_w2, ffn_b2;         // hidden x 12, 1 x 12

    PlannerParams() = default;

    PlannerParams(text::Vocabulary vocab_, const PlannerDims& dims_)
        : dims(dims_),
          vocab(std::move(vocab_)),
          encoder(vocab.size(), dims.model_dim, dims.max_tokens),
          bev_projection(sim::BevGrid::kFeatureChannels, dims.model_dim),
          occ_fusion(dims.model_dim, dims.num_heads),
          plan_fusion(dims.model_dim, dims.num_heads),
          pool_query(1, dims.model_dim),
          ffn_w1(dims.model_dim, dims.ffn_hidden),
          ffn_b1(1, dims.ffn_hidden),
          ffn_w2(dims.ffn_hidden, 2 * sim::Trajectory::kWaypoints),
          ffn_b2(1, 2 * sim::Trajectory::kWaypoints) {}

    static PlannerParams seeded(text::Vocabulary vocab, const PlannerDims& dims,
                                std::uint64_t seed) {
        PlannerParams p(std::move(vocab), dims);
        Rng rng(seed);
        const double b = 1.0 / std::sqrt(static_cast<double>(dims.model_dim));
        p.encoder = text::EncoderParams::seeded(p.vocab.size(), dims.model_dim, rng,
                                                dims.max_tokens);
        p.bev_projection = nn::Matrix::seeded_uniform(sim::BevGrid::kFeatureChannels,
                                                      dims.model_dim, -b, b, rng);
        p.occ_fusion = nn::AttentionParams::seeded(dims.model_dim, dims.num_heads, rng);
        p.plan_fusion = nn::AttentionParams::seeded(dims.model_dim, dims.num_heads, rng);
        p.pool_query = nn::Matrix::seeded_uniform(1, dims.model_dim, -b, b, rng);
        p.ffn_w1 = nn::Matrix::seeded_uniform(dims.model_dim, dims.ffn_hidden, -b, b, rng);
        p.ffn_w2 = nn::Matrix::seeded_uniform(dims.ffn_hidden, 2 * sim::Trajectory::kWaypoints,
                                              -b, b, rng);
        return p;
    }

    // stable name -> tensor mapping; checkpoint and optimizer order
    std::vector<std::pair<std::string, nn::Matrix*>> named_tensors() {
        std::vector<std::pair<std::string, nn::Matrix*>> out;
        out.emplace_back("encoder.embedding", &encoder.embedding);
        out.emplace_back("bev_projection", &bev_projection);
        auto attention = [&out](const std::string& prefix, nn::AttentionParams& a) {
            for (std::size_t h = 0; h < a.num_heads; ++h) {
                const std::string hp = prefix + ".h" + std::to_string(h);
                out.emplace_back(hp + ".wq", &a.wq[h]);
                out.emplace_back(hp + ".wk", &a.wk[h]);
                out.emplace_back(hp + ".wv", &a.wv[h]);
            }
            out.emplace_back(prefix + ".wo", &a.wo);
        };
        attention("fuse_occ", occ_fusion);
        attention("fuse_plan", plan_fusion);
        out.emplace_back("pool.query", &pool_query);
        out.emplace_back("head.w1", &ffn_w1);
        out.emplace_back("head.b1", &ffn_b1);
        out.emplace_back("head.w2", &ffn_w2);
        out.emplace_back("head.b2", &ffn_b2);
        return out;
    }

    std::vector<std::pair<std::string, const nn::Matrix*>> named_tensors() const {
        auto mutable_view = const_cast<PlannerParams*>(this)->named_tensors();
        std::vector<std::pair<std::string, const nn::Matrix*>> out;
        out.reserve(mutable_view.size());
        for (auto& [name, m] : mutable_view) out.emplace_back(name, m);
        return out;
    }
};

} // namespace dme::planner
