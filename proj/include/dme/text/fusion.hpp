#pragma once

#include "dme/nn/attention.hpp"
#include "dme/sim/types.hpp"
#include "dme/text/encoder.hpp"

namespace dme::text {

// Residual cross-attention: BEV tokens attend over the text encoding and
// the result is added back onto the BEV tokens. With a zero output
// projection this is exactly the identity on b.
inline nn::Var logical_fuse(nn::Tape& tape, nn::Var bev_tokens, nn::Var text,
                            const nn::AttentionVars& p) {
    nn::Var attended = nn::multi_head_attention(tape, bev_tokens, text, text, p);
    return tape.add(attended, bev_tokens);
}

inline nn::Matrix logical_fuse(const nn::Matrix& bev_tokens, const TextEncoding& t,
                               const nn::AttentionParams& p) {
    if (bev_tokens.cols() != t.dim())
        throw std::invalid_argument("logical_fuse: BEV tokens " + bev_tokens.shape_str() +
                                    " and text " + t.vectors.shape_str() + " disagree on dim");
    nn::Tape tape;
    nn::AttentionVars pv = nn::register_attention(tape, p);
    nn::Var out = logical_fuse(tape, tape.leaf(bev_tokens), tape.leaf(t.vectors), pv);
    return tape.value(out);
}

// BEV grid cells as tokens: row r*W + c carries the C feature channels of
// cell (r, c). The reshape is lossless; the trainable channel projection
// (C -> d) is applied separately when C != d.
inline nn::Matrix bev_to_tokens(const sim::BevGrid& grid) {
    constexpr int H = sim::BevGrid::kH, W = sim::BevGrid::kW, C = sim::BevGrid::kFeatureChannels;
    nn::Matrix m(static_cast<std::size_t>(H) * W, C);
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c)
            for (int ch = 0; ch < C; ++ch) m(r * W + c, ch) = grid.feature(ch, r, c);
    return m;
}

inline void tokens_to_bev(const nn::Matrix& tokens, sim::BevGrid& grid) {
    constexpr int H = sim::BevGrid::kH, W = sim::BevGrid::kW, C = sim::BevGrid::kFeatureChannels;
    if (tokens.rows() != static_cast<std::size_t>(H) * W || tokens.cols() != C)
        throw std::invalid_argument("tokens_to_bev: expected " + std::to_string(H * W) + "x" +
                                    std::to_string(C) + ", got " + tokens.shape_str());
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c)
            for (int ch = 0; ch < C; ++ch) grid.feature(ch, r, c) = tokens(r * W + c, ch);
}

inline nn::Matrix project_bev_channels(const sim::BevGrid& grid, const nn::Matrix& projection) {
    return nn::matmul(bev_to_tokens(grid), projection);
}

} // namespace dme::text
