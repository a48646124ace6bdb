#include "navigation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>

#include <json.hpp>

#include "error.hpp"

namespace airs::nav {

namespace {

using geom::Vec2;
using nlohmann::json;

constexpr double kRad2Deg = 180.0 / M_PI;
constexpr double kTurnQuantumDeg = 15.0;
constexpr double kWalkRound = 0.1;       // meters
constexpr double kMinTurnDeg = 0.05;     // below this a turn is "zero" and omitted
constexpr double kMinWalk = 0.05;        // waypoints closer than this are skipped
constexpr double kLandmarkConeDeg = 20.0;

}  // namespace

bool cost_less(StepCost a, StepCost b) {
    // a < b  <=>  da < db * sqrt(2) with the integers below.
    const long long da = a.straight - b.straight;
    const long long db = b.diag - a.diag;
    if (db == 0) return da < 0;
    if (db > 0) {
        if (da < 0) return true;
        return da * da < 2 * db * db;
    }
    if (da >= 0) return false;
    return da * da > 2 * db * db;
}

env::OccupancyGrid inflate(const env::OccupancyGrid& grid, double radius) {
    if (radius < 0.0) raise(Errc::invalid_config, "inflation radius must be non-negative");
    if (radius == 0.0) return grid;

    // Offsets whose cell center lies within radius of the occupied cell's
    // footprint square (not just its center).
    const int reach = static_cast<int>(std::ceil(radius / grid.resolution)) + 1;
    std::vector<std::pair<int, int>> offsets;
    for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
            const double ex = std::max(std::abs(dx) - 0.5, 0.0) * grid.resolution;
            const double ey = std::max(std::abs(dy) - 0.5, 0.0) * grid.resolution;
            if (std::hypot(ex, ey) <= radius) offsets.emplace_back(dx, dy);
        }
    }

    env::OccupancyGrid out = grid;
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            if (!grid.occupied(col, row)) continue;
            for (const auto& [dx, dy] : offsets) {
                const int nc = col + dx, nr = row + dy;
                if (out.in_bounds(nc, nr)) out.set(nc, nr, true);
            }
        }
    }
    return out;
}

namespace {

struct OpenEntry {
    StepCost f;
    StepCost h;
    int col, row;
    long long order_index;  // row-major tie-break
};

struct OpenOrder {
    // priority_queue keeps the "largest" on top; invert to pop the smallest.
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return cost_less(b.f, a.f);
        if (a.h != b.h) return cost_less(b.h, a.h);
        return a.order_index > b.order_index;
    }
};

StepCost octile(int c0, int r0, int c1, int r1) {
    const long long dx = std::abs(c1 - c0), dy = std::abs(r1 - r0);
    return {std::max(dx, dy) - std::min(dx, dy), std::min(dx, dy)};
}

}  // namespace

Path plan_path(const env::OccupancyGrid& grid, Pose2D start, Vec2 goal) {
    const auto [sc, sr] = grid.cell_of(start.position);
    const auto [gc, gr] = grid.cell_of(goal);
    if (!grid.in_bounds(sc, sr) || grid.occupied(sc, sr))
        raise(Errc::start_occupied, "start pose maps to an occupied or out-of-bounds cell");
    if (!grid.in_bounds(gc, gr) || grid.occupied(gc, gr))
        raise(Errc::goal_occupied, "goal maps to an occupied or out-of-bounds cell");

    const size_t n = static_cast<size_t>(grid.width) * grid.height;
    std::vector<StepCost> g(n, StepCost{-1, -1});  // -1,-1 = unvisited
    std::vector<int> parent(n, -1);
    std::vector<uint8_t> closed(n, 0);
    auto idx = [&](int c, int r) { return static_cast<size_t>(r) * grid.width + c; };

    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    g[idx(sc, sr)] = {0, 0};
    open.push({octile(sc, sr, gc, gr), octile(sc, sr, gc, gr), sc, sr,
               static_cast<long long>(idx(sc, sr))});

    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    bool found = false;
    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        const size_t ti = idx(top.col, top.row);
        if (closed[ti]) continue;
        closed[ti] = 1;
        if (top.col == gc && top.row == gr) {
            found = true;
            break;
        }
        for (int k = 0; k < 8; ++k) {
            const int nc = top.col + kDx[k], nr = top.row + kDy[k];
            if (!grid.in_bounds(nc, nr) || grid.occupied(nc, nr)) continue;
            const bool diagonal = k >= 4;
            if (diagonal &&
                (grid.occupied(top.col + kDx[k], top.row) || grid.occupied(top.col, top.row + kDy[k])))
                continue;  // no corner cutting
            const size_t ni = idx(nc, nr);
            if (closed[ni]) continue;
            const StepCost tentative =
                g[ti] + (diagonal ? StepCost{0, 1} : StepCost{1, 0});
            if (g[ni].straight >= 0 && !cost_less(tentative, g[ni])) continue;
            g[ni] = tentative;
            parent[ni] = static_cast<int>(ti);
            const StepCost h = octile(nc, nr, gc, gr);
            open.push({tentative + h, h, nc, nr, static_cast<long long>(ni)});
        }
    }
    if (!found) raise(Errc::no_path, "goal is unreachable from the start");

    Path path;
    path.cost = g[idx(gc, gr)];
    path.length_m = path.cost.cells() * grid.resolution;
    for (int at = static_cast<int>(idx(gc, gr)); at >= 0; at = parent[static_cast<size_t>(at)])
        path.cells.emplace_back(at % grid.width, at / grid.width);
    std::reverse(path.cells.begin(), path.cells.end());
    return path;
}

namespace {

// Supercover traversal on a doubled lattice: cell centers are odd integer
// points, grid lines even ones, so corner contacts are exact.
template <typename Visit>
bool walk_supercover(std::pair<int, int> from, std::pair<int, int> to, Visit&& visit) {
    int c = from.first, r = from.second;
    const int c1 = to.first, r1 = to.second;
    const long long x0 = 2LL * c + 1, y0 = 2LL * r + 1;
    const long long dx = 2LL * (c1 - c), dy = 2LL * (r1 - r);
    const int sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;
    const long long ax = std::abs(dx), ay = std::abs(dy);

    if (!visit(c, r)) return false;
    while (c != c1 || r != r1) {
        if (ax == 0) {
            r += sy;
            if (!visit(c, r)) return false;
            continue;
        }
        if (ay == 0) {
            c += sx;
            if (!visit(c, r)) return false;
            continue;
        }
        const long long next_x = 2LL * c + (sx > 0 ? 2 : 0);
        const long long next_y = 2LL * r + (sy > 0 ? 2 : 0);
        const long long nx = std::abs(next_x - x0);
        const long long ny = std::abs(next_y - y0);
        const long long cmp = nx * ay - ny * ax;
        if (cmp < 0) {
            c += sx;
        } else if (cmp > 0) {
            r += sy;
        } else {
            // exact corner contact: both side cells are touched
            if (!visit(c + sx, r)) return false;
            if (!visit(c, r + sy)) return false;
            c += sx;
            r += sy;
        }
        if (!visit(c, r)) return false;
    }
    return true;
}

}  // namespace

bool segment_free(const env::OccupancyGrid& grid, std::pair<int, int> from,
                  std::pair<int, int> to) {
    return walk_supercover(from, to, [&](int c, int r) {
        return grid.in_bounds(c, r) && !grid.occupied(c, r);
    });
}

std::vector<Vec2> simplify(const Path& path, const env::OccupancyGrid& grid) {
    if (path.cells.empty()) raise(Errc::usage, "cannot simplify an empty path");
    std::vector<Vec2> waypoints;
    waypoints.push_back(grid.cell_center(path.cells.front().first, path.cells.front().second));

    size_t i = 0;
    while (i + 1 < path.cells.size()) {
        size_t best = i + 1;
        for (size_t j = path.cells.size(); j-- > i + 1;) {
            if (segment_free(grid, path.cells[i], path.cells[j])) {
                best = j;
                break;
            }
        }
        waypoints.push_back(grid.cell_center(path.cells[best].first, path.cells[best].second));
        i = best;
    }
    return waypoints;
}

namespace {

std::string format_meters(double m) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", m);
    return buf;
}

const Landmark* pick_landmark(const std::vector<Landmark>& landmarks, Vec2 from, double heading) {
    const Landmark* best = nullptr;
    double best_angle = kLandmarkConeDeg / kRad2Deg;
    double best_dist = 0.0;
    for (const Landmark& lm : landmarks) {
        const Vec2 d = lm.position - from;
        const double dist = d.norm();
        if (dist < 1e-9) continue;
        const double off = std::abs(geom::normalize_angle(std::atan2(d.y, d.x) - heading));
        if (off < best_angle || (off == best_angle && best && dist < best_dist)) {
            best = &lm;
            best_angle = off;
            best_dist = dist;
        }
    }
    return best;
}

}  // namespace

std::vector<Instruction> instructions(const std::vector<Vec2>& waypoints, Pose2D start,
                                      const std::vector<Landmark>& landmarks) {
    if (waypoints.empty()) raise(Errc::usage, "instructions need at least one waypoint");

    std::vector<Instruction> out;
    Vec2 pos = start.position;
    double heading = start.heading;

    for (const Vec2& wp : waypoints) {
        const Vec2 d = wp - pos;
        const double dist = d.norm();
        if (dist < kMinWalk) continue;

        const double segment_heading = std::atan2(d.y, d.x);
        const double raw_turn = geom::normalize_angle(segment_heading - heading);
        const double raw_turn_deg = raw_turn * kRad2Deg;
        if (std::abs(raw_turn_deg) >= kMinTurnDeg) {
            Instruction turn;
            turn.kind = InstructionKind::turn;
            turn.raw_turn_degrees = raw_turn_deg;
            turn.turn_degrees = std::round(raw_turn_deg / kTurnQuantumDeg) * kTurnQuantumDeg;
            if (turn.turn_degrees == 0.0) {
                turn.text = "Continue straight ahead.";
            } else {
                const char* side = turn.turn_degrees > 0.0 ? "left" : "right";
                turn.text = "Turn " + std::string(side) + " " +
                            std::to_string(static_cast<int>(std::abs(turn.turn_degrees))) +
                            " degrees.";
            }
            out.push_back(std::move(turn));
            heading = segment_heading;
        }

        Instruction walk;
        walk.kind = InstructionKind::walk;
        walk.raw_walk_meters = dist;
        walk.walk_meters = std::round(dist / kWalkRound) * kWalkRound;
        walk.text = "Walk " + format_meters(walk.walk_meters) + " meters";
        if (const Landmark* lm = pick_landmark(landmarks, pos, segment_heading)) {
            walk.landmark = lm->label;
            walk.text += " toward the " + lm->label;
        }
        walk.text += ".";
        out.push_back(std::move(walk));
        pos = wp;
    }

    Instruction arrive;
    arrive.kind = InstructionKind::arrive;
    arrive.text = "You have arrived at the target area.";
    out.push_back(std::move(arrive));
    return out;
}

std::vector<Instruction> replan(const env::OccupancyGrid& grid, Pose2D current, Vec2 goal,
                                const std::vector<Landmark>& landmarks) {
    const Path path = plan_path(grid, current, goal);
    return instructions(simplify(path, grid), current, landmarks);
}

std::vector<Landmark> landmarks_from_map(const env::SemanticLabelMap& map,
                                         const env::OccupancyGrid& grid) {
    std::vector<Landmark> out;
    for (const env::SemanticRegion& r : map.regions) {
        const Vec2 lo = grid.cell_center(r.col_min, r.row_min);
        const Vec2 hi = grid.cell_center(r.col_max, r.row_max);
        out.push_back({{(lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0}, r.label});
    }
    return out;
}

std::vector<PoseRecord> load_pose_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::file_not_found, "cannot open pose stream: " + path);

    std::vector<PoseRecord> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.contains("x") || !rec.contains("y"))
            raise(Errc::malformed_record,
                  path + ":" + std::to_string(line_no) + ": expected {t, x, y, heading}");
        PoseRecord pr;
        pr.t = rec.value("t", 0.0);
        pr.pose.position = {rec["x"].get<double>(), rec["y"].get<double>()};
        pr.pose.heading = geom::normalize_angle(rec.value("heading", 0.0));
        records.push_back(pr);
    }
    if (records.empty()) raise(Errc::empty_input, path + ": pose stream is empty");
    return records;
}

}  // namespace airs::nav
