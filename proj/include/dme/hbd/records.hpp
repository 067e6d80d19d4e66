#pragma once

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "dme/hbd/dialogue.hpp"

namespace dme::hbd {

// Strict-mode record violation (the validate-records CLI maps this to a
// nonzero exit).
class RecordError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReadStats {
    std::size_t parsed = 0;
    std::size_t skipped = 0;
    std::vector<std::string> diagnostics;  // one per malformed line
};

inline nlohmann::ordered_json record_to_json(const DialogueRecord& r) {
    nlohmann::ordered_json turns = nlohmann::ordered_json::array();
    for (const DialogueTurn& t : r.turns) turns.push_back({{"q", t.question}, {"a", t.answer}});
    return nlohmann::ordered_json{{"source", source_name(r.source)},
                                  {"scene", r.scene_id},
                                  {"turns", std::move(turns)},
                                  {"needs_review", r.needs_review}};
}

inline DialogueRecord record_from_json(const nlohmann::ordered_json& j) {
    DialogueRecord r;
    const auto source = parse_source(j.at("source").get<std::string>());
    if (!source) throw std::runtime_error("unknown source '" + j.at("source").get<std::string>() + "'");
    r.source = *source;
    r.scene_id = j.at("scene").get<std::string>();
    for (const auto& t : j.at("turns"))
        r.turns.push_back({t.at("q").get<std::string>(), t.at("a").get<std::string>()});
    r.needs_review = j.value("needs_review", false);
    if (r.turns.empty()) throw std::runtime_error("record has no turns");
    if (static_cast<int>(r.turns.size()) > turn_limit(r.source))
        throw std::runtime_error("record has " + std::to_string(r.turns.size()) +
                                 " turns, over the '" + source_name(r.source) + "' limit of " +
                                 std::to_string(turn_limit(r.source)));
    return r;
}

inline void write_records(const std::filesystem::path& path,
                          std::span<const DialogueRecord> records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_records: cannot write " + path.string());
    for (const DialogueRecord& r : records) out << record_to_json(r).dump() << '\n';
}

// Line-delimited records. Malformed lines are reported with their line
// number and skipped; in strict mode the first violation aborts.
inline std::vector<DialogueRecord> read_records(const std::filesystem::path& path,
                                                bool strict = false,
                                                ReadStats* stats = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_records: cannot read " + path.string());
    std::vector<DialogueRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(nlohmann::ordered_json::parse(line)));
            if (stats) ++stats->parsed;
        } catch (const std::exception& e) {
            const std::string diagnostic =
                path.string() + " line " + std::to_string(line_no) + ": " + e.what();
            if (strict) throw RecordError(diagnostic);
            if (stats) {
                ++stats->skipped;
                stats->diagnostics.push_back(diagnostic);
            }
        }
    }
    return records;
}

} // namespace dme::hbd
