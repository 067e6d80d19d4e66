#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dme/decision/category.hpp"
#include "dme/nn/matrix.hpp"

namespace dme::sim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Ego frame convention used everywhere: +x forward, +y left, the ego sits
// at the origin.
struct EgoStatus {
    double speed = 0.0;    // m/s, >= 0
    double heading = 0.0;  // radians CCW, 0 = +x
};

// Other traffic participant: axis-aligned rectangle footprint moving at a
// constant velocity (the motion-prediction stand-in).
struct Agent {
    Vec2 position;                 // center, ego frame (m)
    Vec2 velocity;                 // m/s
    double half_x = 0.5;           // footprint half-extent along x (m), > 0
    double half_y = 0.5;           // along y (m), > 0
    bool operator==(const Agent&) const = default;

    Vec2 position_at(double t) const {
        return {position.x + velocity.x * t, position.y + velocity.y * t};
    }
};

struct Lane {
    std::vector<Vec2> centerline;  // polyline, ego frame
    double width = 3.5;            // m
    bool operator==(const Lane&) const = default;
};

// 6 ego-frame waypoints at 0.5 s spacing over a 3 s horizon.
struct Trajectory {
    static constexpr int kWaypoints = 6;
    static constexpr double kDt = 0.5;      // s between waypoints
    static constexpr double kMaxSpeed = 20.0;  // m/s bound used by the validity check

    std::array<Vec2, kWaypoints> points{};

    bool operator==(const Trajectory&) const = default;

    static double time_of(int index) { return kDt * (index + 1); }

    // indices of the 1 s / 2 s / 3 s evaluation points
    static constexpr std::array<int, 3> kHorizonIndices = {1, 3, 5};

    nn::Matrix to_matrix() const {
        nn::Matrix m(kWaypoints, 2);
        for (int i = 0; i < kWaypoints; ++i) {
            m(i, 0) = points[i].x;
            m(i, 1) = points[i].y;
        }
        return m;
    }

    static Trajectory from_matrix(const nn::Matrix& m) {
        if (m.rows() != kWaypoints || m.cols() != 2)
            throw std::invalid_argument("Trajectory::from_matrix: expected 6x2, got " +
                                        m.shape_str());
        Trajectory t;
        for (int i = 0; i < kWaypoints; ++i) t.points[i] = {m(i, 0), m(i, 1)};
        return t;
    }

    // consecutive-waypoint spacing must fit under kMaxSpeed
    bool spacing_valid() const {
        Vec2 prev{0.0, 0.0};
        for (const Vec2& p : points) {
            if (distance(prev, p) > kMaxSpeed * kDt) return false;
            prev = p;
        }
        return true;
    }
};

// Fixed-geometry BEV grid: 32x32 cells at 0.5 m/cell, ego at cell (16,16),
// row index follows +x, column index follows +y. Cell (r,c) covers
// [(r-16)*0.5, (r-15)*0.5) x [(c-16)*0.5, (c-15)*0.5) meters.
struct BevGrid {
    static constexpr int kH = 32;
    static constexpr int kW = 32;
    static constexpr int kFeatureChannels = 16;
    static constexpr int kTimeSteps = 7;       // t = 0.0, 0.5, ..., 3.0 s
    static constexpr double kCell = 0.5;       // m
    static constexpr double kExtent = 8.0;     // m, grid spans [-8, 8)
    static constexpr int kEgoRow = 16;
    static constexpr int kEgoCol = 16;

    std::vector<double> features;                                  // [ch][r][c]
    std::array<std::vector<std::uint8_t>, kTimeSteps> occupancy;    // each kH*kW

    BevGrid() : features(kFeatureChannels * kH * kW, 0.0) {
        for (auto& g : occupancy) g.assign(kH * kW, 0);
    }

    double& feature(int ch, int r, int c) { return features[(ch * kH + r) * kW + c]; }
    double feature(int ch, int r, int c) const { return features[(ch * kH + r) * kW + c]; }

    std::uint8_t& occ(int t_index, int r, int c) { return occupancy[t_index][r * kW + c]; }
    std::uint8_t occ(int t_index, int r, int c) const { return occupancy[t_index][r * kW + c]; }

    // false when (x, y) is outside the grid
    static bool world_to_cell(double x, double y, int& r, int& c) {
        const double fr = std::floor(x / kCell) + kEgoRow;
        const double fc = std::floor(y / kCell) + kEgoCol;
        if (fr < 0 || fr >= kH || fc < 0 || fc >= kW) return false;
        r = static_cast<int>(fr);
        c = static_cast<int>(fc);
        return true;
    }

    static double cell_center_x(int r) { return (r - kEgoRow + 0.5) * kCell; }
    static double cell_center_y(int c) { return (c - kEgoCol + 0.5) * kCell; }

    bool operator==(const BevGrid&) const = default;
};

inline double occupancy_time_of(int index) { return 0.5 * index; }

// index into the 7-grid occupancy lattice; throws off-lattice
inline int occupancy_index_of(double t) {
    const double k = t / 0.5;
    const auto rounded = static_cast<int>(std::lround(k));
    if (std::abs(k - rounded) > 1e-9 || rounded < 0 || rounded >= BevGrid::kTimeSteps)
        throw std::invalid_argument("occupancy time " + std::to_string(t) +
                                    " is not on the 0.0..3.0 s half-second lattice");
    return rounded;
}

struct Scene {
    std::string id;
    std::uint64_t seed = 0;
    decision::DecisionCategory tag = decision::DecisionCategory::Forward;
    EgoStatus ego;
    std::vector<Agent> agents;
    Lane lane;
    Trajectory expert;
    std::array<std::vector<std::uint8_t>, BevGrid::kTimeSteps> occupancy;  // each kH*kW

    Scene() {
        for (auto& g : occupancy) g.assign(BevGrid::kH * BevGrid::kW, 0);
    }
};

} // namespace dme::sim
