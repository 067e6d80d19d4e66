#pragma once

#include <cmath>
#include <span>

#include "dme/nn/tape.hpp"
#include "dme/text/vocab.hpp"

namespace dme::text {

// Sequence of d-dimensional token vectors for one piece of text.
struct TextEncoding {
    nn::Matrix vectors;  // n x d, n >= 1

    std::size_t count() const { return vectors.rows(); }
    std::size_t dim() const { return vectors.cols(); }
};

inline nn::Matrix sinusoidal_positions(std::size_t max_len, std::size_t dim) {
    nn::Matrix pos(max_len, dim);
    for (std::size_t i = 0; i < max_len; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            const double rate = std::pow(10000.0, -static_cast<double>(k / 2 * 2) /
                                                      static_cast<double>(dim));
            const double angle = static_cast<double>(i) * rate;
            pos(i, k) = (k % 2 == 0) ? std::sin(angle) : std::cos(angle);
        }
    }
    return pos;
}

// Trainable token embeddings plus a fixed sinusoidal positional table. The
// desk-scale stand-in for a pretrained text encoder; anything that produces
// an n x d matrix per text can sit behind the same TextEncoding contract.
struct EncoderParams {
    nn::Matrix embedding;   // |V| x d, trainable
    nn::Matrix positional;  // max_len x d, fixed

    EncoderParams() = default;

    EncoderParams(std::size_t vocab_size, std::size_t dim, std::size_t max_len = 128)
        : embedding(vocab_size, dim), positional(sinusoidal_positions(max_len, dim)) {}

    static EncoderParams seeded(std::size_t vocab_size, std::size_t dim, Rng& rng,
                                std::size_t max_len = 128) {
        EncoderParams p(vocab_size, dim, max_len);
        const double b = 1.0 / std::sqrt(static_cast<double>(dim));
        p.embedding = nn::Matrix::seeded_uniform(vocab_size, dim, -b, b, rng);
        return p;
    }

    std::size_t dim() const { return embedding.cols(); }
    std::size_t max_len() const { return positional.rows(); }
};

namespace detail {
inline void check_ids(std::span<const int> ids, const EncoderParams& p) {
    if (ids.empty()) throw std::invalid_argument("encode_text: ids must be nonempty");
    if (ids.size() > p.max_len())
        throw std::invalid_argument("encode_text: " + std::to_string(ids.size()) +
                                    " tokens exceed positional table length " +
                                    std::to_string(p.max_len()));
    for (int id : ids)
        if (id < 0 || static_cast<std::size_t>(id) >= p.embedding.rows())
            throw std::invalid_argument("encode_text: token id " + std::to_string(id) +
                                        " outside embedding table of " +
                                        std::to_string(p.embedding.rows()) + " rows");
}
} // namespace detail

// row i = embedding[ids[i]] + positional[i]
inline TextEncoding encode_text(std::span<const int> ids, const EncoderParams& p) {
    detail::check_ids(ids, p);
    nn::Matrix m(ids.size(), p.dim());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t k = 0; k < p.dim(); ++k)
            m(i, k) = p.embedding(static_cast<std::size_t>(ids[i]), k) + p.positional(i, k);
    return TextEncoding{std::move(m)};
}

// traced variant: embeddings stay trainable, positions enter as a constant
inline nn::Var encode_text(nn::Tape& tape, std::span<const int> ids, nn::Var embedding,
                           const EncoderParams& p) {
    detail::check_ids(ids, p);
    nn::Var gathered = tape.gather_rows(embedding, std::vector<int>(ids.begin(), ids.end()));
    nn::Var pos = tape.leaf([&] {
        nn::Matrix m(ids.size(), p.dim());
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t k = 0; k < p.dim(); ++k) m(i, k) = p.positional(i, k);
        return m;
    }());
    return tape.add(gathered, pos);
}

// T_occ: encoding of the gaze text and the scene-description text stacked
// row-wise, in that order.
inline TextEncoding build_occ_text(const std::string& gaze, const std::string& description,
                                   const Vocabulary& vocab, const EncoderParams& p) {
    const TextEncoding a = encode_text(vocab.encode(gaze), p);
    const TextEncoding b = encode_text(vocab.encode(description), p);
    nn::Matrix m(a.count() + b.count(), p.dim());
    for (std::size_t r = 0; r < a.count(); ++r)
        for (std::size_t k = 0; k < p.dim(); ++k) m(r, k) = a.vectors(r, k);
    for (std::size_t r = 0; r < b.count(); ++r)
        for (std::size_t k = 0; k < p.dim(); ++k) m(a.count() + r, k) = b.vectors(r, k);
    return TextEncoding{std::move(m)};
}

inline nn::Var build_occ_text(nn::Tape& tape, const std::string& gaze,
                              const std::string& description, const Vocabulary& vocab,
                              nn::Var embedding, const EncoderParams& p) {
    nn::Var a = encode_text(tape, vocab.encode(gaze), embedding, p);
    nn::Var b = encode_text(tape, vocab.encode(description), embedding, p);
    const nn::Var parts[] = {a, b};
    return tape.concat_rows(parts);
}

} // namespace dme::text
