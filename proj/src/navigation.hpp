#pragma once

#include <string>
#include <vector>

#include "env.hpp"
#include "geometry.hpp"

namespace airs::nav {

struct Pose2D {
    geom::Vec2 position;
    double heading = 0.0;  // radians in (-pi, pi], 0 = +x, positive = CCW
};

// Path cost as an exact (straight, diagonal) step-count pair; the real cost
// is straight + diag * sqrt(2). Comparisons stay in integer arithmetic so
// optimality checks are exact.
struct StepCost {
    long long straight = 0;
    long long diag = 0;

    StepCost operator+(StepCost o) const { return {straight + o.straight, diag + o.diag}; }
    bool operator==(const StepCost&) const = default;
    double cells() const { return static_cast<double>(straight) + std::sqrt(2.0) * diag; }
};

// Exact a < b on straight + diag*sqrt(2).
bool cost_less(StepCost a, StepCost b);

struct Path {
    std::vector<std::pair<int, int>> cells;  // (col,row), 8-adjacent
    StepCost cost;
    double length_m = 0.0;
};

enum class InstructionKind { turn, walk, arrive };

struct Instruction {
    InstructionKind kind = InstructionKind::arrive;
    double turn_degrees = 0.0;      // quantized to 15 degrees, positive = left
    double walk_meters = 0.0;       // rounded to 0.1 m
    double raw_turn_degrees = 0.0;  // unquantized values, kept for replay
    double raw_walk_meters = 0.0;
    std::string text;
    std::string landmark;  // empty when none
};

struct Landmark {
    geom::Vec2 position;
    std::string label;
};

// Occupied iff the cell center lies within radius of an (originally)
// occupied cell's footprint square. radius 0 returns the grid unchanged.
env::OccupancyGrid inflate(const env::OccupancyGrid& grid, double radius);

// Minimal-cost 8-connected path. Straight steps cost 1, diagonals sqrt(2);
// diagonal moves additionally require both adjacent orthogonal cells free so
// paths never cut corners. Ties resolved by lower f, lower h, row-major.
Path plan_path(const env::OccupancyGrid& grid, Pose2D start, geom::Vec2 goal);

// Greedy line-of-sight shortcutting; a segment is admissible when its
// supercover (every cell the segment touches, corner contacts included) is
// free. Returns world points (cell centers); endpoints preserved.
std::vector<geom::Vec2> simplify(const Path& path, const env::OccupancyGrid& grid);

// Supercover visibility between two cells, exposed for the simplifier tests.
bool segment_free(const env::OccupancyGrid& grid, std::pair<int, int> from,
                  std::pair<int, int> to);

// Egocentric turn/walk/arrive list. Turns are omitted below 0.05 degrees and
// waypoints closer than 5 cm are skipped; quantization applies to the spoken
// fields only, raw values are retained. Landmarks within 20 degrees of a
// segment heading annotate the walk instruction.
std::vector<Instruction> instructions(const std::vector<geom::Vec2>& waypoints, Pose2D start,
                                      const std::vector<Landmark>& landmarks = {});

std::vector<Instruction> replan(const env::OccupancyGrid& grid, Pose2D current, geom::Vec2 goal,
                                const std::vector<Landmark>& landmarks = {});

// World-space landmark positions (region centers) for a grid-referenced map.
std::vector<Landmark> landmarks_from_map(const env::SemanticLabelMap& map,
                                         const env::OccupancyGrid& grid);

struct PoseRecord {
    double t = 0.0;
    Pose2D pose;
};

// JSONL of {t, x, y, heading}.
std::vector<PoseRecord> load_pose_stream(const std::string& path);

}  // namespace airs::nav
