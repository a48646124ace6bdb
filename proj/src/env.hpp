#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace airs::env {

struct PointCloud {
    std::vector<geom::Vec3> points;
};

// ASCII PLY or XYZ CSV, chosen by content (a leading "ply" line) and falling
// back to CSV otherwise.
PointCloud load_point_cloud(const std::string& path);

struct OccupancyGrid {
    int width = 0;
    int height = 0;
    double resolution = 0.0;   // meters per cell
    geom::Vec2 origin;         // world position of the corner of cell (0,0)
    std::vector<uint8_t> cells;  // row-major, 1 = occupied

    bool occupied(int col, int row) const { return cells[static_cast<size_t>(row) * width + col] != 0; }
    void set(int col, int row, bool v) { cells[static_cast<size_t>(row) * width + col] = v ? 1 : 0; }
    bool in_bounds(int col, int row) const {
        return col >= 0 && row >= 0 && col < width && row < height;
    }
    geom::Vec2 cell_center(int col, int row) const {
        return {origin.x + (col + 0.5) * resolution, origin.y + (row + 0.5) * resolution};
    }
    // Cell containing a world point (may be out of bounds).
    std::pair<int, int> cell_of(geom::Vec2 p) const {
        return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
                static_cast<int>(std::floor((p.y - origin.y) / resolution))};
    }
    size_t occupied_count() const;
};

struct GridExtent {
    geom::Vec2 origin;  // snapped to resolution multiples by the caller
    int width = 0;
    int height = 0;
};

// A cell is occupied when at least min_hits points with z in [z_min, z_max]
// fall into it. Without an explicit extent the grid covers the cloud's xy
// bounding box with the origin snapped down to a resolution multiple; with
// one, out-of-extent points are dropped.
OccupancyGrid project_occupancy(const PointCloud& cloud, double resolution, double z_min,
                                double z_max, int min_hits = 3,
                                std::optional<GridExtent> extent = std::nullopt);

// P5 PGM (0 = free, 255 = occupied, top row = highest y) with a JSON sidecar
// "<path>.json" carrying {resolution, origin_x, origin_y}.
void save_grid_pgm(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid load_grid_pgm(const std::string& path);

// Single-file JSON form; rows[0] is grid row 0 (lowest y), '1' = occupied.
void save_grid_json(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid load_grid_json(const std::string& path);

// Dispatches on the .pgm / .json extension.
void save_grid(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid load_grid(const std::string& path);

struct SemanticRegion {
    int col_min = 0, row_min = 0, col_max = 0, row_max = 0;  // inclusive cells
    std::string label;
};

struct SemanticLabelMap {
    std::vector<SemanticRegion> regions;
};

SemanticLabelMap load_label_map(const std::string& path);
// Throws when a region lies outside the grid.
void validate_label_map(const SemanticLabelMap& map, const OccupancyGrid& grid);

}  // namespace airs::env
