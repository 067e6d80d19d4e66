#pragma once

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "dme/decision/driver_logic.hpp"
#include "dme/planner/train.hpp"
#include "dme/sim/scene_io.hpp"

namespace dme::cli {

inline nlohmann::ordered_json logic_to_json(const std::string& scene_id,
                                            const decision::DriverLogicOutput& logic) {
    return nlohmann::ordered_json{{"scene", scene_id},
                                  {"category", decision::category_name(logic.category)},
                                  {"gaze", logic.gaze_text},
                                  {"description", logic.description_text},
                                  {"reasoning", logic.reasoning_text},
                                  {"decision", logic.decision_text}};
}

inline decision::DriverLogicOutput logic_from_json(const nlohmann::ordered_json& j,
                                                   std::string* scene_id = nullptr) {
    decision::DriverLogicOutput out;
    if (scene_id) *scene_id = j.at("scene").get<std::string>();
    out.category = decision::parse_category_or_throw(j.at("category").get<std::string>());
    out.gaze_text = j.at("gaze").get<std::string>();
    out.description_text = j.at("description").get<std::string>();
    out.reasoning_text = j.at("reasoning").get<std::string>();
    out.decision_text = j.at("decision").get<std::string>();
    if (out.decision_text.empty()) throw std::runtime_error("logic record: empty decision text");
    return out;
}

inline void write_logic(const std::filesystem::path& path, std::span<const sim::Scene> scenes,
                        std::span<const decision::DriverLogicOutput> logic) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_logic: cannot write " + path.string());
    for (std::size_t i = 0; i < scenes.size(); ++i)
        out << logic_to_json(scenes[i].id, logic[i]).dump() << '\n';
}

inline std::vector<decision::DriverLogicOutput> read_logic(const std::filesystem::path& path,
                                                           std::vector<std::string>* ids = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_logic: cannot read " + path.string());
    std::vector<decision::DriverLogicOutput> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            std::string id;
            out.push_back(logic_from_json(nlohmann::ordered_json::parse(line), &id));
            if (ids) ids->push_back(id);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + " line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return out;
}

// one split of a generated dataset directory
struct DatasetSplit {
    std::vector<planner::TrainExample> examples;
};

inline DatasetSplit load_split(const std::filesystem::path& dir, const std::string& split) {
    const auto scenes = sim::read_scenes(dir / ("scenes_" + split + ".jsonl"));
    const auto logic = read_logic(dir / ("logic_" + split + ".jsonl"));
    if (scenes.size() != logic.size())
        throw std::runtime_error("load_split: " + dir.string() + " has " +
                                 std::to_string(scenes.size()) + " scenes but " +
                                 std::to_string(logic.size()) + " logic records");
    DatasetSplit out;
    out.examples.reserve(scenes.size());
    for (std::size_t i = 0; i < scenes.size(); ++i)
        out.examples.push_back({scenes[i], logic[i]});
    return out;
}

} // namespace dme::cli
