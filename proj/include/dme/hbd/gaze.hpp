#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dme::hbd {

struct GazePoint {
    double x = 0.0;  // image pixels, >= 0
    double y = 0.0;
    bool operator==(const GazePoint&) const = default;
};

// Gaze points from one 24-frame window (fewer at clip boundaries, never 0).
struct GazeTrace {
    static constexpr int kWindowFrames = 24;
    std::vector<GazePoint> points;
};

struct BBox {
    double x_min = 0.0, y_min = 0.0, x_max = 0.0, y_max = 0.0;
    bool operator==(const BBox&) const = default;

    bool contains(const GazePoint& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
};

// min/max of x and y over every gaze point in the window
inline BBox gaze_to_bbox(const GazeTrace& trace) {
    if (trace.points.empty())
        throw std::invalid_argument("gaze_to_bbox: trace has no points");
    BBox b{trace.points[0].x, trace.points[0].y, trace.points[0].x, trace.points[0].y};
    for (const GazePoint& p : trace.points) {
        b.x_min = std::min(b.x_min, p.x);
        b.y_min = std::min(b.y_min, p.y);
        b.x_max = std::max(b.x_max, p.x);
        b.y_max = std::max(b.y_max, p.y);
    }
    return b;
}

// textual rendering used in dialogue answers
inline std::string bbox_text(const BBox& b) {
    std::ostringstream out;
    out << "region (" << b.x_min << "," << b.y_min << ")-(" << b.x_max << "," << b.y_max << ")";
    return out.str();
}

// CSV import: "frame,x,y" per line (header allowed), grouped into disjoint
// 24-frame windows by frame index.
inline std::vector<GazeTrace> read_gaze_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_gaze_csv: cannot read " + path.string());
    std::vector<std::pair<long, GazePoint>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string frame_s, x_s, y_s;
        if (!std::getline(cells, frame_s, ',') || !std::getline(cells, x_s, ',') ||
            !std::getline(cells, y_s, ','))
            throw std::runtime_error("read_gaze_csv: " + path.string() + " line " +
                                     std::to_string(line_no) + ": expected frame,x,y");
        if (line_no == 1 && frame_s == "frame") continue;  // header
        try {
            GazePoint p{std::stod(x_s), std::stod(y_s)};
            if (p.x < 0 || p.y < 0)
                throw std::runtime_error("negative coordinate");
            rows.emplace_back(std::stol(frame_s), p);
        } catch (const std::exception& e) {
            throw std::runtime_error("read_gaze_csv: " + path.string() + " line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
    }
    std::vector<GazeTrace> traces;
    for (const auto& [frame, point] : rows) {
        const std::size_t window = static_cast<std::size_t>(frame / GazeTrace::kWindowFrames);
        if (traces.size() <= window) traces.resize(window + 1);
        traces[window].points.push_back(point);
    }
    std::erase_if(traces, [](const GazeTrace& t) { return t.points.empty(); });
    return traces;
}

} // namespace dme::hbd
