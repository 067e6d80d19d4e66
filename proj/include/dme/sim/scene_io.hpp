#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dme/sim/rasterize.hpp"
#include "dme/sim/types.hpp"

namespace dme::sim {

using ordered_json = nlohmann::ordered_json;

// Occupancy grids travel as run-length strings: "value:count" pairs joined
// by commas, row-major, e.g. "0:512,1:3,0:509".
inline std::string rle_encode(const std::vector<std::uint8_t>& grid) {
    std::ostringstream out;
    std::size_t i = 0;
    bool first = true;
    while (i < grid.size()) {
        std::size_t j = i;
        while (j < grid.size() && grid[j] == grid[i]) ++j;
        if (!first) out << ',';
        out << static_cast<int>(grid[i]) << ':' << (j - i);
        first = false;
        i = j;
    }
    return out.str();
}

inline std::vector<std::uint8_t> rle_decode(const std::string& text, std::size_t expected) {
    std::vector<std::uint8_t> grid;
    grid.reserve(expected);
    std::istringstream in(text);
    std::string run;
    while (std::getline(in, run, ',')) {
        const auto colon = run.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("rle_decode: malformed run '" + run + "'");
        const int value = std::stoi(run.substr(0, colon));
        const long count = std::stol(run.substr(colon + 1));
        if ((value != 0 && value != 1) || count < 0)
            throw std::runtime_error("rle_decode: bad run '" + run + "'");
        grid.insert(grid.end(), static_cast<std::size_t>(count),
                    static_cast<std::uint8_t>(value));
    }
    if (grid.size() != expected)
        throw std::runtime_error("rle_decode: decoded " + std::to_string(grid.size()) +
                                 " cells, expected " + std::to_string(expected));
    return grid;
}

inline ordered_json scene_to_json(const Scene& s) {
    ordered_json j;
    j["id"] = s.id;
    j["seed"] = s.seed;
    j["tag"] = decision::category_name(s.tag);
    j["ego"] = {{"speed", s.ego.speed}, {"heading", s.ego.heading}};
    ordered_json agents = ordered_json::array();
    for (const Agent& a : s.agents)
        agents.push_back({{"x", a.position.x},
                          {"y", a.position.y},
                          {"vx", a.velocity.x},
                          {"vy", a.velocity.y},
                          {"hx", a.half_x},
                          {"hy", a.half_y}});
    j["agents"] = std::move(agents);
    ordered_json center = ordered_json::array();
    for (const Vec2& p : s.lane.centerline) center.push_back({p.x, p.y});
    j["lane"] = {{"centerline", std::move(center)}, {"width", s.lane.width}};
    ordered_json expert = ordered_json::array();
    for (const Vec2& p : s.expert.points) expert.push_back({p.x, p.y});
    j["expert"] = std::move(expert);
    ordered_json occ = ordered_json::array();
    for (const auto& grid : s.occupancy) occ.push_back(rle_encode(grid));
    j["occupancy"] = std::move(occ);
    return j;
}

inline Scene scene_from_json(const ordered_json& j) {
    Scene s;
    s.id = j.at("id").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.tag = decision::parse_category_or_throw(j.at("tag").get<std::string>());
    s.ego.speed = j.at("ego").at("speed").get<double>();
    s.ego.heading = j.at("ego").at("heading").get<double>();
    for (const auto& a : j.at("agents")) {
        Agent agent;
        agent.position = {a.at("x").get<double>(), a.at("y").get<double>()};
        agent.velocity = {a.at("vx").get<double>(), a.at("vy").get<double>()};
        agent.half_x = a.at("hx").get<double>();
        agent.half_y = a.at("hy").get<double>();
        s.agents.push_back(agent);
    }
    s.lane.width = j.at("lane").at("width").get<double>();
    s.lane.centerline.clear();
    for (const auto& p : j.at("lane").at("centerline"))
        s.lane.centerline.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    const auto& expert = j.at("expert");
    if (expert.size() != Trajectory::kWaypoints)
        throw std::runtime_error("scene_from_json: expert must have 6 waypoints");
    for (std::size_t i = 0; i < Trajectory::kWaypoints; ++i)
        s.expert.points[i] = {expert[i].at(0).get<double>(), expert[i].at(1).get<double>()};
    const auto& occ = j.at("occupancy");
    if (occ.size() != BevGrid::kTimeSteps)
        throw std::runtime_error("scene_from_json: expected 7 occupancy grids");
    for (std::size_t k = 0; k < BevGrid::kTimeSteps; ++k)
        s.occupancy[k] = rle_decode(occ[k].get<std::string>(), BevGrid::kH * BevGrid::kW);
    return s;
}

// BEV feature grids use the same line format when they travel on their own:
// one channel per JSON array, base-10 floats.
inline ordered_json grid_to_json(const BevGrid& grid) {
    ordered_json j;
    ordered_json feats = ordered_json::array();
    for (int ch = 0; ch < BevGrid::kFeatureChannels; ++ch) {
        ordered_json plane = ordered_json::array();
        for (int r = 0; r < BevGrid::kH; ++r)
            for (int c = 0; c < BevGrid::kW; ++c) plane.push_back(grid.feature(ch, r, c));
        feats.push_back(std::move(plane));
    }
    j["features"] = std::move(feats);
    ordered_json occ = ordered_json::array();
    for (const auto& g : grid.occupancy) occ.push_back(rle_encode(g));
    j["occupancy"] = std::move(occ);
    return j;
}

inline BevGrid grid_from_json(const ordered_json& j) {
    BevGrid grid;
    const auto& feats = j.at("features");
    if (feats.size() != BevGrid::kFeatureChannels)
        throw std::runtime_error("grid_from_json: expected 16 feature channels");
    for (int ch = 0; ch < BevGrid::kFeatureChannels; ++ch) {
        const auto& plane = feats[static_cast<std::size_t>(ch)];
        if (plane.size() != BevGrid::kH * BevGrid::kW)
            throw std::runtime_error("grid_from_json: bad channel size");
        for (int r = 0; r < BevGrid::kH; ++r)
            for (int c = 0; c < BevGrid::kW; ++c)
                grid.feature(ch, r, c) = plane[r * BevGrid::kW + c].get<double>();
    }
    const auto& occ = j.at("occupancy");
    for (std::size_t k = 0; k < BevGrid::kTimeSteps; ++k)
        grid.occupancy[k] = rle_decode(occ.at(k).get<std::string>(), BevGrid::kH * BevGrid::kW);
    return grid;
}

inline void write_scenes(const std::filesystem::path& path, std::span<const Scene> scenes) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_scenes: cannot write " + path.string());
    for (const Scene& s : scenes) out << scene_to_json(s).dump() << '\n';
}

inline std::vector<Scene> read_scenes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_scenes: cannot read " + path.string());
    std::vector<Scene> scenes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            scenes.push_back(scene_from_json(ordered_json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + " line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return scenes;
}

} // namespace dme::sim
