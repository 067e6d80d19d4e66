#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dme/nn/tape.hpp"

namespace dme::nn {

// Multi-head attention weights: per-head query/key/value projections
// (dim x head_dim each) plus a shared output projection (dim x dim).
struct AttentionParams {
    std::size_t dim = 0;
    std::size_t num_heads = 0;
    std::vector<Matrix> wq, wk, wv;
    Matrix wo;

    AttentionParams() = default;

    AttentionParams(std::size_t dim_, std::size_t num_heads_)
        : dim(dim_), num_heads(num_heads_) {
        if (num_heads == 0 || dim % num_heads != 0)
            throw std::invalid_argument("AttentionParams: dim " + std::to_string(dim) +
                                        " not divisible by num_heads " + std::to_string(num_heads));
        const std::size_t hd = head_dim();
        wq.assign(num_heads, Matrix(dim, hd));
        wk.assign(num_heads, Matrix(dim, hd));
        wv.assign(num_heads, Matrix(dim, hd));
        wo = Matrix(dim, dim);
    }

    static AttentionParams seeded(std::size_t dim, std::size_t num_heads, Rng& rng) {
        AttentionParams p(dim, num_heads);
        const double b = 1.0 / std::sqrt(static_cast<double>(dim));
        for (std::size_t h = 0; h < num_heads; ++h) {
            p.wq[h] = Matrix::seeded_uniform(dim, p.head_dim(), -b, b, rng);
            p.wk[h] = Matrix::seeded_uniform(dim, p.head_dim(), -b, b, rng);
            p.wv[h] = Matrix::seeded_uniform(dim, p.head_dim(), -b, b, rng);
        }
        p.wo = Matrix::seeded_uniform(dim, dim, -b, b, rng);
        return p;
    }

    std::size_t head_dim() const { return dim / num_heads; }
};

// Tape handles mirroring AttentionParams, registered as leaves.
struct AttentionVars {
    std::vector<Var> wq, wk, wv;
    Var wo;
};

inline AttentionVars register_attention(Tape& tape, const AttentionParams& p) {
    AttentionVars v;
    for (std::size_t h = 0; h < p.num_heads; ++h) {
        v.wq.push_back(tape.leaf(p.wq[h]));
        v.wk.push_back(tape.leaf(p.wk[h]));
        v.wv.push_back(tape.leaf(p.wv[h]));
    }
    v.wo = tape.leaf(p.wo);
    return v;
}

// Scaled dot-product attention per head (scale 1/sqrt(head_dim)), heads
// concatenated, then the output projection.
inline Var multi_head_attention(Tape& tape, Var q, Var k, Var v, const AttentionVars& p) {
    const std::size_t nk = tape.value(k).rows();
    if (nk == 0)
        throw std::invalid_argument(
            "multi_head_attention: empty key/value context; encode at least one token");
    const std::size_t heads = p.wq.size();
    const std::size_t hd = tape.value(p.wq[0]).cols();
    const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

    std::vector<Var> outs;
    outs.reserve(heads);
    for (std::size_t h = 0; h < heads; ++h) {
        Var qh = tape.matmul(q, p.wq[h]);
        Var kh = tape.matmul(k, p.wk[h]);
        Var vh = tape.matmul(v, p.wv[h]);
        Var scores = tape.scale(tape.matmul(qh, tape.transpose(kh)), scale);
        Var weights = tape.softmax_rows(scores);
        outs.push_back(tape.matmul(weights, vh));
    }
    Var concat = tape.concat_cols(outs);
    return tape.matmul(concat, p.wo);
}

// Plain-matrix entry point; runs the traced graph on a throwaway tape so
// both paths share one implementation.
inline Matrix multi_head_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                   const AttentionParams& p) {
    if (q.cols() != p.dim || k.cols() != p.dim || v.cols() != p.dim)
        throw std::invalid_argument("multi_head_attention: dim mismatch: q " + q.shape_str() +
                                    ", k " + k.shape_str() + ", v " + v.shape_str() +
                                    " vs model dim " + std::to_string(p.dim));
    if (k.rows() != v.rows())
        throw std::invalid_argument("multi_head_attention: k rows " + k.shape_str() +
                                    " != v rows " + v.shape_str());
    Tape tape;
    AttentionVars pv = register_attention(tape, p);
    Var out = multi_head_attention(tape, tape.leaf(q), tape.leaf(k), tape.leaf(v), pv);
    return tape.value(out);
}

} // namespace dme::nn
