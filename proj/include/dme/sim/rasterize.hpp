#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dme/sim/types.hpp"

namespace dme::sim {

namespace detail {

// Marks cells whose area genuinely overlaps the rectangle (touching along a
// boundary does not count).
inline void splat_rect(std::vector<std::uint8_t>& grid, double cx, double cy, double hx,
                       double hy) {
    constexpr int H = BevGrid::kH, W = BevGrid::kW;
    constexpr double cell = BevGrid::kCell;
    const double x0 = cx - hx, x1 = cx + hx;
    const double y0 = cy - hy, y1 = cy + hy;
    const int r0 = std::max(0, static_cast<int>(std::floor(x0 / cell)) + BevGrid::kEgoRow);
    const int r1 = std::min(H - 1, static_cast<int>(std::floor(x1 / cell)) + BevGrid::kEgoRow);
    const int c0 = std::max(0, static_cast<int>(std::floor(y0 / cell)) + BevGrid::kEgoCol);
    const int c1 = std::min(W - 1, static_cast<int>(std::floor(y1 / cell)) + BevGrid::kEgoCol);
    for (int r = r0; r <= r1; ++r) {
        const double cell_x0 = (r - BevGrid::kEgoRow) * cell;
        const double cell_x1 = cell_x0 + cell;
        if (!(x0 < cell_x1 && x1 > cell_x0)) continue;
        for (int c = c0; c <= c1; ++c) {
            const double cell_y0 = (c - BevGrid::kEgoCol) * cell;
            const double cell_y1 = cell_y0 + cell;
            if (y0 < cell_y1 && y1 > cell_y0) grid[r * W + c] = 1;
        }
    }
}

// signed distance from point to the lane centerline polyline (+left)
inline double signed_centerline_offset(const Lane& lane, double x, double y) {
    if (lane.centerline.size() < 2) return 0.0;
    double best = 1e18;
    double best_signed = 0.0;
    for (std::size_t i = 0; i + 1 < lane.centerline.size(); ++i) {
        const Vec2 a = lane.centerline[i], b = lane.centerline[i + 1];
        const double vx = b.x - a.x, vy = b.y - a.y;
        const double len2 = vx * vx + vy * vy;
        double t = len2 > 0 ? ((x - a.x) * vx + (y - a.y) * vy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double px = a.x + t * vx, py = a.y + t * vy;
        const double d = std::hypot(x - px, y - py);
        if (d < best) {
            best = d;
            // cross product sign: +1 when the point lies left of the segment
            const double cross = vx * (y - a.y) - vy * (x - a.x);
            best_signed = cross >= 0 ? d : -d;
        }
    }
    return best_signed;
}

} // namespace detail

// Occupancy at lattice time t: agents advanced by constant-velocity
// extrapolation and re-rasterized. Throws when t is off the half-second
// lattice.
inline std::vector<std::uint8_t> occupancy_at(const Scene& scene, double t) {
    occupancy_index_of(t);  // validates the lattice
    std::vector<std::uint8_t> grid(BevGrid::kH * BevGrid::kW, 0);
    for (const Agent& a : scene.agents) {
        const Vec2 p = a.position_at(t);
        detail::splat_rect(grid, p.x, p.y, a.half_x, a.half_y);
    }
    return grid;
}

// Exact Euclidean distance (m) from every cell center to the nearest
// occupied cell center; empty grids give a large constant everywhere.
inline nn::Matrix distance_transform(const std::vector<std::uint8_t>& occ,
                                     double empty_distance = 1e6) {
    constexpr int H = BevGrid::kH, W = BevGrid::kW;
    nn::Matrix dist(H, W, empty_distance);
    std::vector<std::pair<int, int>> occupied;
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c)
            if (occ[r * W + c]) occupied.emplace_back(r, c);
    if (occupied.empty()) return dist;
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            double best = 1e18;
            for (auto [orr, occ_c] : occupied) {
                const double dr = (r - orr) * BevGrid::kCell;
                const double dc = (c - occ_c) * BevGrid::kCell;
                best = std::min(best, dr * dr + dc * dc);
            }
            dist(r, c) = std::sqrt(best);
        }
    }
    return dist;
}

// Feature channel layout (documented contract; all hand-crafted stand-ins
// for the learned perception stack):
//   0  lane mask (1 inside the lane)
//   1  signed distance to the lane centerline, clamped to [-4, 4] m
//   2  summed agent vx splatted onto covered cells
//   3  summed agent vy splatted onto covered cells
//   4  ego speed broadcast
//   5  cell center x / 8 (normalized forward coordinate)
//   6  cell center y / 8 (normalized lateral coordinate)
//   7  agent count per cell
//   8..14  occupancy at t = 0.0, 0.5, ..., 3.0 s (predicted-occupancy cue)
//   15 distance transform of t=0 occupancy, clamped to 4 m
inline BevGrid rasterize_bev(const Scene& scene) {
    constexpr int H = BevGrid::kH, W = BevGrid::kW;
    BevGrid grid;
    for (int k = 0; k < BevGrid::kTimeSteps; ++k)
        grid.occupancy[k] = occupancy_at(scene, occupancy_time_of(k));

    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const double x = BevGrid::cell_center_x(r);
            const double y = BevGrid::cell_center_y(c);
            const double off = detail::signed_centerline_offset(scene.lane, x, y);
            grid.feature(0, r, c) = std::abs(off) <= scene.lane.width / 2.0 ? 1.0 : 0.0;
            grid.feature(1, r, c) = std::clamp(off, -4.0, 4.0);
            grid.feature(4, r, c) = scene.ego.speed;
            grid.feature(5, r, c) = x / BevGrid::kExtent;
            grid.feature(6, r, c) = y / BevGrid::kExtent;
        }
    }
    for (const Agent& a : scene.agents) {
        std::vector<std::uint8_t> mask(H * W, 0);
        detail::splat_rect(mask, a.position.x, a.position.y, a.half_x, a.half_y);
        for (int r = 0; r < H; ++r) {
            for (int c = 0; c < W; ++c) {
                if (!mask[r * W + c]) continue;
                grid.feature(2, r, c) += a.velocity.x;
                grid.feature(3, r, c) += a.velocity.y;
                grid.feature(7, r, c) += 1.0;
            }
        }
    }
    for (int k = 0; k < BevGrid::kTimeSteps; ++k)
        for (int r = 0; r < H; ++r)
            for (int c = 0; c < W; ++c) grid.feature(8 + k, r, c) = grid.occ(k, r, c);
    const nn::Matrix dt = distance_transform(grid.occupancy[0]);
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c) grid.feature(15, r, c) = std::min(dt(r, c), 4.0);
    return grid;
}

// true when the waypoint at time t sits in an occupied cell; off-grid
// waypoints never collide
inline bool waypoint_collides(const Scene& scene, Vec2 p, double t) {
    int r, c;
    if (!BevGrid::world_to_cell(p.x, p.y, r, c)) return false;
    const int k = occupancy_index_of(t);
    return scene.occupancy[k][r * BevGrid::kW + c] != 0;
}

inline bool trajectory_collides(const Scene& scene, const Trajectory& traj,
                                double horizon = 3.0) {
    for (int i = 0; i < Trajectory::kWaypoints; ++i) {
        const double t = Trajectory::time_of(i);
        if (t > horizon + 1e-9) break;
        if (waypoint_collides(scene, traj.points[i], t)) return true;
    }
    return false;
}

} // namespace dme::sim
