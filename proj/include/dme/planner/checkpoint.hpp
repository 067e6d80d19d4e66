#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>

#include "dme/planner/params.hpp"

namespace dme::planner {

// Checkpoint layout (little-endian throughout):
//   magic "DMEP" | u32 version | u32 tensor count |
//   per tensor: u32 name length | name bytes | u32 rows | u32 cols |
//               rows*cols float64 payload
inline constexpr char kCheckpointMagic[4] = {'D', 'M', 'E', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

inline std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_f64(std::ostream& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(b, 8);
}

inline double read_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("checkpoint: truncated payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

} // namespace detail

inline void save_checkpoint(const PlannerParams& params, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot write " + path.string());
    out.write(kCheckpointMagic, 4);
    detail::write_u32(out, kCheckpointVersion);
    const auto tensors = params.named_tensors();
    detail::write_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& [name, m] : tensors) {
        detail::write_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        detail::write_u32(out, static_cast<std::uint32_t>(m->rows()));
        detail::write_u32(out, static_cast<std::uint32_t>(m->cols()));
        for (double v : m->values()) detail::write_f64(out, v);
    }
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path.string());
}

// The vocabulary is not stored in the checkpoint; callers pass the one
// saved beside the dataset. Dims are recovered from tensor shapes.
inline PlannerParams load_checkpoint(const std::filesystem::path& path, text::Vocabulary vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot read " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0)
        throw std::runtime_error("load_checkpoint: " + path.string() + " is not a DMEP file");
    const std::uint32_t version = detail::read_u32(in);
    if (version != kCheckpointVersion)
        throw std::runtime_error("load_checkpoint: unsupported version " +
                                 std::to_string(version));
    const std::uint32_t count = detail::read_u32(in);

    std::map<std::string, nn::Matrix> tensors;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = detail::read_u32(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const std::uint32_t rows = detail::read_u32(in);
        const std::uint32_t cols = detail::read_u32(in);
        nn::Matrix m(rows, cols);
        for (double& v : m.values()) v = detail::read_f64(in);
        tensors.emplace(std::move(name), std::move(m));
    }

    PlannerDims dims;
    const auto proj = tensors.find("bev_projection");
    if (proj == tensors.end())
        throw std::runtime_error("load_checkpoint: missing tensor 'bev_projection'");
    dims.model_dim = proj->second.cols();
    dims.num_heads = 0;
    while (tensors.count("fuse_occ.h" + std::to_string(dims.num_heads) + ".wq")) ++dims.num_heads;
    if (dims.num_heads == 0)
        throw std::runtime_error("load_checkpoint: missing fusion head tensors");
    const auto w1 = tensors.find("head.w1");
    if (w1 == tensors.end()) throw std::runtime_error("load_checkpoint: missing tensor 'head.w1'");
    dims.ffn_hidden = w1->second.cols();

    PlannerParams params(std::move(vocab), dims);
    for (auto& [name, dst] : params.named_tensors()) {
        auto it = tensors.find(name);
        if (it == tensors.end())
            throw std::runtime_error("load_checkpoint: missing tensor '" + name + "'");
        if (!dst->same_shape(it->second))
            throw std::runtime_error("load_checkpoint: tensor '" + name + "' is " +
                                     it->second.shape_str() + ", expected " + dst->shape_str() +
                                     " (vocabulary mismatch?)");
        *dst = std::move(it->second);
    }
    return params;
}

} // namespace dme::planner
