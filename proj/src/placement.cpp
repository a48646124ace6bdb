#include "placement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>

#include <json.hpp>

#include "error.hpp"

namespace airs::placement {

namespace {

using geom::Vec2;
using nlohmann::json;

constexpr double kResolutionEps = 1e-12;

}  // namespace

size_t BinaryMask::required_count() const {
    return static_cast<size_t>(std::count(cells.begin(), cells.end(), uint8_t{1}));
}

std::vector<std::pair<int, int>> BinaryMask::boundary_cells() const {
    std::vector<std::pair<int, int>> out;
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            if (!required(col, row)) continue;
            bool boundary = false;
            for (int dr = -1; dr <= 1 && !boundary; ++dr) {
                for (int dc = -1; dc <= 1 && !boundary; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int nc = col + dc, nr = row + dr;
                    if (nc < 0 || nr < 0 || nc >= width || nr >= height || !required(nc, nr))
                        boundary = true;
                }
            }
            if (boundary) out.emplace_back(col, row);
        }
    }
    return out;
}

BinaryMask rasterize(const footprint::PlacementFootprint& fp, double resolution) {
    if (resolution <= 0.0) raise(Errc::invalid_config, "resolution must be positive");

    const geom::Ellipse2D& e = fp.exercise_region;
    const double rx = e.semi_major();  // loose bound, refined by trimming
    double min_x = e.center.x - rx, max_x = e.center.x + rx;
    double min_y = e.center.y - rx, max_y = e.center.y + rx;
    min_x = std::min(min_x, fp.camera_point.x - fp.tripod_radius);
    max_x = std::max(max_x, fp.camera_point.x + fp.tripod_radius);
    min_y = std::min(min_y, fp.camera_point.y - fp.tripod_radius);
    max_y = std::max(max_y, fp.camera_point.y + fp.tripod_radius);

    // Lattice indices of candidate cells (cell i covers [i*res, (i+1)*res)).
    const long long i0 = static_cast<long long>(std::floor(min_x / resolution)) - 1;
    const long long i1 = static_cast<long long>(std::floor(max_x / resolution)) + 1;
    const long long j0 = static_cast<long long>(std::floor(min_y / resolution)) - 1;
    const long long j1 = static_cast<long long>(std::floor(max_y / resolution)) + 1;

    long long t_min_i = i1 + 1, t_max_i = i0 - 1, t_min_j = j1 + 1, t_max_j = j0 - 1;
    std::vector<std::pair<long long, long long>> inside;
    for (long long j = j0; j <= j1; ++j) {
        for (long long i = i0; i <= i1; ++i) {
            const Vec2 center{(i + 0.5) * resolution, (j + 0.5) * resolution};
            if (!fp.contains(center)) continue;
            inside.emplace_back(i, j);
            t_min_i = std::min(t_min_i, i);
            t_max_i = std::max(t_max_i, i);
            t_min_j = std::min(t_min_j, j);
            t_max_j = std::max(t_max_j, j);
        }
    }
    if (inside.empty())
        raise(Errc::empty_mask, "resolution too coarse: no cell center falls in the footprint");

    BinaryMask mask;
    mask.resolution = resolution;
    mask.width = static_cast<int>(t_max_i - t_min_i + 1);
    mask.height = static_cast<int>(t_max_j - t_min_j + 1);
    mask.cells.assign(static_cast<size_t>(mask.width) * mask.height, 0);
    for (const auto& [i, j] : inside)
        mask.cells[static_cast<size_t>(j - t_min_j) * mask.width + (i - t_min_i)] = 1;

    const long long anchor_i = static_cast<long long>(std::floor(e.center.x / resolution));
    const long long anchor_j = static_cast<long long>(std::floor(e.center.y / resolution));
    mask.anchor_col = static_cast<int>(anchor_i - t_min_i);
    mask.anchor_row = static_cast<int>(anchor_j - t_min_j);
    mask.center_offset = {e.center.x - anchor_i * resolution, e.center.y - anchor_j * resolution};
    return mask;
}

namespace {

std::vector<PlacementCandidate> search_one_rotation(const env::OccupancyGrid& grid,
                                                    const BinaryMask& mask, int rotation_index,
                                                    double rotation) {
    std::vector<PlacementCandidate> found;
    // Anchor positions keeping the whole mask in bounds.
    const int col_lo = mask.anchor_col;
    const int col_hi = grid.width - (mask.width - mask.anchor_col);
    const int row_lo = mask.anchor_row;
    const int row_hi = grid.height - (mask.height - mask.anchor_row);

    for (int row = row_lo; row <= row_hi; ++row) {
        for (int col = col_lo; col <= col_hi; ++col) {
            bool clear = true;
            for (int mr = 0; mr < mask.height && clear; ++mr) {
                const int gr = row - mask.anchor_row + mr;
                const size_t mask_base = static_cast<size_t>(mr) * mask.width;
                const size_t grid_base = static_cast<size_t>(gr) * grid.width;
                for (int mc = 0; mc < mask.width; ++mc) {
                    if (mask.cells[mask_base + mc] &&
                        grid.cells[grid_base + (col - mask.anchor_col + mc)]) {
                        clear = false;
                        break;
                    }
                }
            }
            if (clear) found.push_back({col, row, rotation_index, rotation, 0.0});
        }
    }
    return found;
}

}  // namespace

std::vector<PlacementCandidate> search(const env::OccupancyGrid& grid,
                                       const std::vector<BinaryMask>& rotated_masks,
                                       const std::vector<double>& rotations) {
    if (rotated_masks.size() != rotations.size())
        raise(Errc::usage, "one mask per rotation expected");
    for (const BinaryMask& mask : rotated_masks) {
        if (std::abs(mask.resolution - grid.resolution) > kResolutionEps)
            raise(Errc::resolution_mismatch, "mask and grid resolution differ");
        if (mask.required_count() == 0) raise(Errc::empty_mask, "mask has no required cells");
    }

    // Rotations are independent; results are concatenated in rotation order
    // so the output does not depend on scheduling.
    std::vector<std::future<std::vector<PlacementCandidate>>> jobs;
    jobs.reserve(rotations.size());
    for (size_t k = 0; k < rotations.size(); ++k) {
        jobs.push_back(std::async(std::launch::async, search_one_rotation, std::cref(grid),
                                  std::cref(rotated_masks[k]), static_cast<int>(k), rotations[k]));
    }
    std::vector<PlacementCandidate> all;
    for (auto& job : jobs) {
        auto part = job.get();
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

std::vector<int> clearance_field(const env::OccupancyGrid& grid) {
    const int w = grid.width, h = grid.height;
    const int inf = w + h + 2;
    std::vector<int> dist(static_cast<size_t>(w) * h, inf);

    // Two-pass chamfer with unit 8-neighbor costs computes the exact
    // Chebyshev distance to the nearest occupied cell.
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const size_t idx = static_cast<size_t>(row) * w + col;
            if (grid.cells[idx]) {
                dist[idx] = 0;
                continue;
            }
            int best = inf;
            if (col > 0) best = std::min(best, dist[idx - 1] + 1);
            if (row > 0) {
                const size_t up = idx - static_cast<size_t>(w);
                best = std::min(best, dist[up] + 1);
                if (col > 0) best = std::min(best, dist[up - 1] + 1);
                if (col + 1 < w) best = std::min(best, dist[up + 1] + 1);
            }
            dist[idx] = best;
        }
    }
    for (int row = h - 1; row >= 0; --row) {
        for (int col = w - 1; col >= 0; --col) {
            const size_t idx = static_cast<size_t>(row) * w + col;
            int best = dist[idx];
            if (col + 1 < w) best = std::min(best, dist[idx + 1] + 1);
            if (row + 1 < h) {
                const size_t down = idx + static_cast<size_t>(w);
                best = std::min(best, dist[down] + 1);
                if (col > 0) best = std::min(best, dist[down - 1] + 1);
                if (col + 1 < w) best = std::min(best, dist[down + 1] + 1);
            }
            dist[idx] = best;
        }
    }

    // Out-of-bounds counts as occupied: fold in the distance to the border.
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const int border = std::min(std::min(col, row), std::min(w - 1 - col, h - 1 - row)) + 1;
            size_t idx = static_cast<size_t>(row) * w + col;
            dist[idx] = std::min(dist[idx], border);
        }
    }
    return dist;
}

double score(const env::OccupancyGrid& grid, const std::vector<int>& clearance,
             const PlacementCandidate& candidate, const BinaryMask& mask, int cap) {
    const auto boundary = mask.boundary_cells();
    double sum = 0.0;
    for (const auto& [mc, mr] : boundary) {
        const int gc = candidate.col - mask.anchor_col + mc;
        const int gr = candidate.row - mask.anchor_row + mr;
        sum += std::min(clearance[static_cast<size_t>(gr) * grid.width + gc], cap);
    }
    return sum / static_cast<double>(boundary.size());
}

PlacementPlan plan(const env::OccupancyGrid& grid, const footprint::FootprintFile& file,
                   const PlanParams& params) {
    if (params.rotation_count <= 0) raise(Errc::invalid_config, "rotation count must be positive");

    std::vector<double> rotations;
    std::vector<BinaryMask> masks;
    for (int k = 0; k < params.rotation_count; ++k) {
        const double angle = 2.0 * M_PI * k / params.rotation_count;
        rotations.push_back(angle);
        masks.push_back(rasterize(file.footprint.rotated_about_center(angle), grid.resolution));
    }

    std::vector<PlacementCandidate> candidates = search(grid, masks, rotations);
    if (candidates.empty()) raise(Errc::no_placement, "no placement found at any rotation");

    const std::vector<int> clearance = clearance_field(grid);
    for (PlacementCandidate& c : candidates)
        c.score = score(grid, clearance, c, masks[static_cast<size_t>(c.rotation_index)],
                        params.score_cap);

    const geom::Vec2 center0 = file.footprint.exercise_region.center;
    auto patient_world = [&](const PlacementCandidate& c) -> Vec2 {
        const BinaryMask& mask = masks[static_cast<size_t>(c.rotation_index)];
        // Grid cell (col,row) corner in world coordinates, plus the ellipse
        // center's sub-cell offset captured at rasterization time.
        return {grid.origin.x + c.col * grid.resolution + mask.center_offset.x,
                grid.origin.y + c.row * grid.resolution + mask.center_offset.y};
    };
    auto user_distance = [&](const PlacementCandidate& c) -> double {
        if (!params.user_position) return 0.0;
        return (patient_world(c) - *params.user_position).norm();
    };

    std::sort(candidates.begin(), candidates.end(),
              [&](const PlacementCandidate& a, const PlacementCandidate& b) {
                  if (a.score != b.score) return a.score > b.score;
                  if (params.user_position) {
                      const double da = user_distance(a), db = user_distance(b);
                      if (da != db) return da < db;
                  }
                  const long long ra = static_cast<long long>(a.row) * grid.width + a.col;
                  const long long rb = static_cast<long long>(b.row) * grid.width + b.col;
                  if (ra != rb) return ra < rb;
                  return a.rotation_index < b.rotation_index;
              });

    PlacementPlan out;
    out.best = candidates.front();
    for (size_t i = 1; i < candidates.size() && out.alternatives.size() < params.max_alternatives;
         ++i)
        out.alternatives.push_back(candidates[i]);

    const Vec2 patient = patient_world(out.best);
    const Vec2 camera_offset =
        (file.footprint.camera_point - center0).rotated(out.best.rotation);
    const Vec2 camera = patient + camera_offset;
    out.patient_pose = {patient, geom::normalize_angle(std::atan2(camera_offset.y, camera_offset.x))};
    out.camera_pose = {camera, geom::normalize_angle(std::atan2(-camera_offset.y, -camera_offset.x))};
    out.camera_mount_height = file.camera.mount_height;
    return out;
}

namespace {

json candidate_json(const PlacementCandidate& c) {
    return {{"col", c.col},
            {"row", c.row},
            {"rotation_index", c.rotation_index},
            {"rotation", c.rotation},
            {"score", c.score}};
}

}  // namespace

void save_plan(const PlacementPlan& plan, const std::string& path) {
    json alts = json::array();
    for (const PlacementCandidate& c : plan.alternatives) alts.push_back(candidate_json(c));
    json doc = {{"best", candidate_json(plan.best)},
                {"patient_pose",
                 {{"x", plan.patient_pose.position.x},
                  {"y", plan.patient_pose.position.y},
                  {"heading", plan.patient_pose.heading}}},
                {"camera_pose",
                 {{"x", plan.camera_pose.position.x},
                  {"y", plan.camera_pose.position.y},
                  {"heading", plan.camera_pose.heading},
                  {"mount_height", plan.camera_mount_height}}},
                {"score", plan.best.score},
                {"rotation", plan.best.rotation},
                {"alternatives", alts}};
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_failure, "cannot write plan: " + path);
    out << doc.dump(2) << "\n";
}

PlacementPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::file_not_found, "cannot open plan: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("patient_pose"))
        raise(Errc::malformed_record, path + ": expected a placement plan document");

    PlacementPlan plan;
    const json& best = doc["best"];
    plan.best = {best["col"].get<int>(), best["row"].get<int>(),
                 best["rotation_index"].get<int>(), best["rotation"].get<double>(),
                 best["score"].get<double>()};
    for (const json& c : doc["alternatives"])
        plan.alternatives.push_back({c["col"].get<int>(), c["row"].get<int>(),
                                     c["rotation_index"].get<int>(), c["rotation"].get<double>(),
                                     c["score"].get<double>()});
    plan.patient_pose = {{doc["patient_pose"]["x"].get<double>(),
                          doc["patient_pose"]["y"].get<double>()},
                         doc["patient_pose"]["heading"].get<double>()};
    plan.camera_pose = {{doc["camera_pose"]["x"].get<double>(),
                         doc["camera_pose"]["y"].get<double>()},
                        doc["camera_pose"]["heading"].get<double>()};
    plan.camera_mount_height = doc["camera_pose"].value("mount_height", 0.0);
    return plan;
}

void save_plan_overlay(const env::OccupancyGrid& grid, const PlacementPlan& plan,
                       const BinaryMask& mask, const std::string& path) {
    std::vector<uint8_t> shade(grid.cells.size());
    for (size_t i = 0; i < grid.cells.size(); ++i) shade[i] = grid.cells[i] ? 255 : 0;
    for (int mr = 0; mr < mask.height; ++mr) {
        for (int mc = 0; mc < mask.width; ++mc) {
            if (!mask.required(mc, mr)) continue;
            const int gc = plan.best.col - mask.anchor_col + mc;
            const int gr = plan.best.row - mask.anchor_row + mr;
            if (grid.in_bounds(gc, gr)) shade[static_cast<size_t>(gr) * grid.width + gc] = 128;
        }
    }
    const auto [pc, pr] = grid.cell_of(plan.patient_pose.position);
    if (grid.in_bounds(pc, pr)) shade[static_cast<size_t>(pr) * grid.width + pc] = 200;
    const auto [cc, cr] = grid.cell_of(plan.camera_pose.position);
    if (grid.in_bounds(cc, cr)) shade[static_cast<size_t>(cr) * grid.width + cc] = 220;

    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_failure, "cannot write overlay: " + path);
    out << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    for (int row = grid.height - 1; row >= 0; --row)
        for (int col = 0; col < grid.width; ++col)
            out.put(static_cast<char>(shade[static_cast<size_t>(row) * grid.width + col]));
}

}  // namespace airs::placement
