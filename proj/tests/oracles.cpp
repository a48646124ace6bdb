#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace oracle {

using airs::geom::Vec2;

std::vector<Vec2> hull_vertices(const std::vector<Vec2>& points, double tol) {
    std::vector<Vec2> distinct = points;
    std::sort(distinct.begin(), distinct.end(),
              [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::set<std::pair<double, double>> verts;
    const size_t n = distinct.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            bool all_left = true;
            bool strictly = false;  // degenerate edges (everything collinear) do not count
            for (size_t k = 0; k < n && all_left; ++k) {
                if (k == i || k == j) continue;
                const double c = airs::geom::cross(distinct[i], distinct[j], distinct[k]);
                if (c < -tol) all_left = false;
                if (c > tol) strictly = true;
            }
            if (all_left && strictly) {
                verts.insert({distinct[i].x, distinct[i].y});
                verts.insert({distinct[j].x, distinct[j].y});
            }
        }
    }
    std::vector<Vec2> out;
    for (const auto& [x, y] : verts) out.push_back({x, y});
    return out;
}

bool same_point_set(std::vector<Vec2> a, std::vector<Vec2> b, double tol) {
    if (a.size() != b.size()) return false;
    auto key = [](Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); };
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i].x - b[i].x) > tol || std::abs(a[i].y - b[i].y) > tol) return false;
    return true;
}

airs::env::OccupancyGrid project_by_counting(const airs::env::PointCloud& cloud,
                                             double resolution, double z_min, double z_max,
                                             int min_hits, Vec2 origin, int width, int height) {
    airs::env::OccupancyGrid grid;
    grid.width = width;
    grid.height = height;
    grid.resolution = resolution;
    grid.origin = origin;
    std::vector<int> hits(static_cast<size_t>(width) * height, 0);
    for (const airs::geom::Vec3& p : cloud.points) {
        if (p.z < z_min || p.z > z_max) continue;
        const int col = static_cast<int>(std::floor((p.x - origin.x) / resolution));
        const int row = static_cast<int>(std::floor((p.y - origin.y) / resolution));
        if (col < 0 || row < 0 || col >= width || row >= height) continue;
        ++hits[static_cast<size_t>(row) * width + col];
    }
    grid.cells.resize(hits.size());
    for (size_t i = 0; i < hits.size(); ++i) grid.cells[i] = hits[i] >= min_hits ? 1 : 0;
    return grid;
}

std::vector<airs::placement::PlacementCandidate> exhaustive_search(
    const airs::env::OccupancyGrid& grid, const std::vector<airs::placement::BinaryMask>& masks,
    const std::vector<double>& rotations) {
    std::vector<airs::placement::PlacementCandidate> found;
    for (size_t k = 0; k < masks.size(); ++k) {
        const airs::placement::BinaryMask& mask = masks[k];
        for (int row = 0; row < grid.height; ++row) {
            for (int col = 0; col < grid.width; ++col) {
                bool ok = true;
                for (int mr = 0; mr < mask.height && ok; ++mr) {
                    for (int mc = 0; mc < mask.width && ok; ++mc) {
                        if (!mask.required(mc, mr)) continue;
                        const int gc = col - mask.anchor_col + mc;
                        const int gr = row - mask.anchor_row + mr;
                        if (!grid.in_bounds(gc, gr) || grid.occupied(gc, gr)) ok = false;
                    }
                }
                if (ok)
                    found.push_back({col, row, static_cast<int>(k), rotations[k], 0.0});
            }
        }
    }
    return found;
}

int chebyshev_clearance(const airs::env::OccupancyGrid& grid, int col, int row) {
    int best = std::min({col, row, grid.width - 1 - col, grid.height - 1 - row}) + 1;
    for (int r = 0; r < grid.height; ++r) {
        for (int c = 0; c < grid.width; ++c) {
            if (!grid.occupied(c, r)) continue;
            best = std::min(best, std::max(std::abs(c - col), std::abs(r - row)));
        }
    }
    return best;
}

DijkstraResult dijkstra_cost(const airs::env::OccupancyGrid& grid, std::pair<int, int> start,
                             std::pair<int, int> goal) {
    using airs::nav::StepCost;
    const int w = grid.width, h = grid.height;
    const size_t n = static_cast<size_t>(w) * h;
    std::vector<StepCost> dist(n, StepCost{-1, -1});
    std::vector<uint8_t> done(n, 0);
    auto idx = [&](int c, int r) { return static_cast<size_t>(r) * w + c; };

    if (grid.occupied(start.first, start.second) || grid.occupied(goal.first, goal.second))
        return {};
    dist[idx(start.first, start.second)] = {0, 0};

    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    for (;;) {
        // linear scan keeps the oracle free of the library's ordering logic
        size_t u = n;
        for (size_t i = 0; i < n; ++i) {
            if (done[i] || dist[i].straight < 0) continue;
            if (u == n || airs::nav::cost_less(dist[i], dist[u])) u = i;
        }
        if (u == n) break;
        done[u] = 1;
        const int c = static_cast<int>(u) % w, r = static_cast<int>(u) / w;
        for (int k = 0; k < 8; ++k) {
            const int nc = c + kDx[k], nr = r + kDy[k];
            if (nc < 0 || nr < 0 || nc >= w || nr >= h) continue;
            if (grid.occupied(nc, nr)) continue;
            const bool diagonal = k >= 4;
            if (diagonal && (grid.occupied(c + kDx[k], r) || grid.occupied(c, r + kDy[k])))
                continue;
            const StepCost alt = dist[u] + (diagonal ? StepCost{0, 1} : StepCost{1, 0});
            StepCost& cur = dist[idx(nc, nr)];
            if (cur.straight < 0 || airs::nav::cost_less(alt, cur)) cur = alt;
        }
    }

    const StepCost& g = dist[idx(goal.first, goal.second)];
    if (g.straight < 0) return {};
    return {true, g};
}

namespace {

// Exact orientation of point p relative to segment a->b (doubled lattice
// integer coordinates).
long long orient(long long ax, long long ay, long long bx, long long by, long long px,
                 long long py) {
    return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

bool on_segment(long long ax, long long ay, long long bx, long long by, long long px,
                long long py) {
    if (orient(ax, ay, bx, by, px, py) != 0) return false;
    return std::min(ax, bx) <= px && px <= std::max(ax, bx) && std::min(ay, by) <= py &&
           py <= std::max(ay, by);
}

bool segments_intersect(long long ax, long long ay, long long bx, long long by, long long cx,
                        long long cy, long long dx, long long dy) {
    const long long d1 = orient(cx, cy, dx, dy, ax, ay);
    const long long d2 = orient(cx, cy, dx, dy, bx, by);
    const long long d3 = orient(ax, ay, bx, by, cx, cy);
    const long long d4 = orient(ax, ay, bx, by, dx, dy);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return on_segment(cx, cy, dx, dy, ax, ay) || on_segment(cx, cy, dx, dy, bx, by) ||
           on_segment(ax, ay, bx, by, cx, cy) || on_segment(ax, ay, bx, by, dx, dy);
}

}  // namespace

bool segment_touches_cell(std::pair<int, int> from, std::pair<int, int> to, int col, int row) {
    // doubled lattice: centers at odd coordinates, cell (col,row) spans
    // [2col, 2col+2] x [2row, 2row+2]
    const long long ax = 2LL * from.first + 1, ay = 2LL * from.second + 1;
    const long long bx = 2LL * to.first + 1, by = 2LL * to.second + 1;
    const long long x0 = 2LL * col, y0 = 2LL * row, x1 = x0 + 2, y1 = y0 + 2;

    // endpoint inside the closed square
    auto inside = [&](long long px, long long py) {
        return x0 <= px && px <= x1 && y0 <= py && py <= y1;
    };
    if (inside(ax, ay) || inside(bx, by)) return true;

    return segments_intersect(ax, ay, bx, by, x0, y0, x1, y0) ||
           segments_intersect(ax, ay, bx, by, x1, y0, x1, y1) ||
           segments_intersect(ax, ay, bx, by, x1, y1, x0, y1) ||
           segments_intersect(ax, ay, bx, by, x0, y1, x0, y0);
}

bool segment_clear_by_overlap(const airs::env::OccupancyGrid& grid, std::pair<int, int> from,
                              std::pair<int, int> to) {
    const int c0 = std::min(from.first, to.first), c1 = std::max(from.first, to.first);
    const int r0 = std::min(from.second, to.second), r1 = std::max(from.second, to.second);
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            if (!grid.occupied(c, r)) continue;
            if (segment_touches_cell(from, to, c, r)) return false;
        }
    }
    return true;
}

airs::nav::Pose2D replay_instructions(airs::nav::Pose2D start,
                                      const std::vector<airs::nav::Instruction>& steps) {
    airs::nav::Pose2D pose = start;
    for (const airs::nav::Instruction& ins : steps) {
        switch (ins.kind) {
        case airs::nav::InstructionKind::turn:
            pose.heading =
                airs::geom::normalize_angle(pose.heading + ins.raw_turn_degrees * M_PI / 180.0);
            break;
        case airs::nav::InstructionKind::walk:
            pose.position.x += ins.raw_walk_meters * std::cos(pose.heading);
            pose.position.y += ins.raw_walk_meters * std::sin(pose.heading);
            break;
        case airs::nav::InstructionKind::arrive:
            break;
        }
    }
    return pose;
}

namespace {

double enum_frame_distance(const airs::align::JointAngleSeries& a, size_t i,
                           const airs::align::JointAngleSeries& b, size_t j,
                           airs::align::FrameMetric metric) {
    double acc = 0.0;
    for (size_t k = 0; k < a.angle_count(); ++k) {
        const double d = a.at(i, k) - b.at(j, k);
        acc += metric == airs::align::FrameMetric::L2 ? d * d : std::abs(d);
    }
    return metric == airs::align::FrameMetric::L2 ? std::sqrt(acc) : acc;
}

void enumerate_paths(const airs::align::JointAngleSeries& ref,
                     const airs::align::JointAngleSeries& query,
                     airs::align::FrameMetric metric, size_t i, size_t j, double acc,
                     double& best) {
    acc += enum_frame_distance(ref, i, query, j, metric);
    if (i + 1 == ref.frame_count() && j + 1 == query.frame_count()) {
        best = std::min(best, acc);
        return;
    }
    if (i + 1 < ref.frame_count() && j + 1 < query.frame_count())
        enumerate_paths(ref, query, metric, i + 1, j + 1, acc, best);
    if (i + 1 < ref.frame_count()) enumerate_paths(ref, query, metric, i + 1, j, acc, best);
    if (j + 1 < query.frame_count()) enumerate_paths(ref, query, metric, i, j + 1, acc, best);
}

}  // namespace

double dtw_cost_by_enumeration(const airs::align::JointAngleSeries& ref,
                               const airs::align::JointAngleSeries& query,
                               airs::align::FrameMetric metric) {
    double best = std::numeric_limits<double>::infinity();
    enumerate_paths(ref, query, metric, 0, 0, 0.0, best);
    return best;
}

}  // namespace oracle
