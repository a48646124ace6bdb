#pragma once

#include <optional>
#include <string>
#include <vector>

#include "env.hpp"
#include "footprint.hpp"
#include "geometry.hpp"

namespace airs::placement {

// Required-free cells of a rasterized footprint. Cells live on the global
// resolution lattice (cell corners at multiples of resolution), so a mask
// slides over any origin-snapped grid without re-sampling. anchor is the mask
// cell containing the ellipse center; center_offset is the center's sub-cell
// offset, kept so world poses survive the raster round trip.
struct BinaryMask {
    int width = 0;
    int height = 0;
    double resolution = 0.0;
    std::vector<uint8_t> cells;  // row-major, 1 = required free
    int anchor_col = 0;
    int anchor_row = 0;
    geom::Vec2 center_offset;  // ellipse center minus anchor cell corner, in meters

    bool required(int col, int row) const {
        return cells[static_cast<size_t>(row) * width + col] != 0;
    }
    size_t required_count() const;
    // true cells that touch a false cell or the mask edge (8-neighborhood)
    std::vector<std::pair<int, int>> boundary_cells() const;
};

struct PlacementCandidate {
    int col = 0;  // grid cell the mask anchor lands on
    int row = 0;
    int rotation_index = 0;
    double rotation = 0.0;  // radians
    double score = 0.0;
};

struct Pose {
    geom::Vec2 position;
    double heading = 0.0;  // radians in (-pi, pi]
};

struct PlacementPlan {
    PlacementCandidate best;
    std::vector<PlacementCandidate> alternatives;  // ranked, best excluded
    Pose patient_pose;
    Pose camera_pose;
    double camera_mount_height = 0.0;
};

// Cell centers inside the footprint geometry, trimmed to the tight bounding
// box of true cells. Throws Errc::empty_mask when no center falls inside.
BinaryMask rasterize(const footprint::PlacementFootprint& fp, double resolution);

// Every anchor position/rotation where the mask overlaps no occupied cell and
// stays in bounds. Exhaustive over all rotations; scores are not filled in.
std::vector<PlacementCandidate> search(const env::OccupancyGrid& grid,
                                       const std::vector<BinaryMask>& rotated_masks,
                                       const std::vector<double>& rotations);

// Chebyshev clearance field: min(cells to nearest occupied cell, cells to the
// boundary), used by score(). Occupied cells hold 0.
std::vector<int> clearance_field(const env::OccupancyGrid& grid);

// Mean over mask boundary cells of min(clearance, cap).
double score(const env::OccupancyGrid& grid, const std::vector<int>& clearance,
             const PlacementCandidate& candidate, const BinaryMask& mask, int cap);

struct PlanParams {
    int rotation_count = 16;
    int score_cap = 10;                      // cells
    size_t max_alternatives = 20;
    std::optional<geom::Vec2> user_position;  // tie-break toward the user
};

PlacementPlan plan(const env::OccupancyGrid& grid, const footprint::FootprintFile& footprint,
                   const PlanParams& params);

void save_plan(const PlacementPlan& plan, const std::string& path);
// The navigate stage only needs the poses back.
PlacementPlan load_plan(const std::string& path);

// Debug overlay: occupied 255, free 0, footprint 128, patient 200, camera 220.
void save_plan_overlay(const env::OccupancyGrid& grid, const PlacementPlan& plan,
                       const BinaryMask& mask, const std::string& path);

}  // namespace airs::placement
