#include "footprint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "error.hpp"

namespace airs::footprint {

namespace {

using geom::Vec2;
using nlohmann::json;

double dist_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

bool PlacementFootprint::contains(Vec2 p) const {
    if (exercise_region.contains(p)) return true;
    return dist_to_segment(p, exercise_region.center, camera_point) <= tripod_radius;
}

PlacementFootprint PlacementFootprint::rotated_about_center(double angle) const {
    PlacementFootprint out = *this;
    const Vec2 c = exercise_region.center;
    out.exercise_region = exercise_region.rotated_about_center(angle);
    out.camera_point = c + (camera_point - c).rotated(angle);
    out.view_direction = view_direction.rotated(angle);
    return out;
}

std::vector<Vec2> floor_projection(std::span<const motion::SkeletonSequence> seqs) {
    std::vector<Vec2> points;
    for (const motion::SkeletonSequence& seq : seqs)
        for (const motion::SkeletonFrame& frame : seq.frames)
            for (const geom::Vec3& joint : frame.joints) points.push_back(joint.xy());
    if (points.empty()) raise(Errc::empty_input, "no joints to project");
    return points;
}

ExerciseVolume exercise_volume(std::span<const motion::SkeletonSequence> seqs, double margin,
                               double mvee_tol, int mvee_max_iters) {
    std::vector<Vec2> points = floor_projection(seqs);
    if (geom::is_degenerate(points)) points = geom::inflate_degenerate(points);

    const geom::Polygon2D hull = geom::convex_hull(points);
    geom::Ellipse2D ellipse =
        geom::min_enclosing_ellipse(hull.vertices, mvee_tol, mvee_max_iters);
    if (margin > 0.0) ellipse = ellipse.dilated(margin);

    double top = -std::numeric_limits<double>::max();
    for (const motion::SkeletonSequence& seq : seqs)
        if (!seq.frames.empty()) top = std::max(top, motion::max_height(seq));

    return {ellipse, top + margin};
}

double camera_standoff(const ExerciseVolume& volume, const CameraSpec& cam) {
    const double radius = volume.ellipse.semi_major();
    const double horizontal = radius / std::tan(cam.hfov / 2.0);
    const double vertical_extent = std::max(volume.height - cam.mount_height, cam.mount_height);
    const double vertical = vertical_extent / std::tan(cam.vfov / 2.0);
    const double d = radius + std::max(horizontal, vertical);
    if (!(d > 0.0)) raise(Errc::impossible_geometry, "non-positive camera standoff");
    return d;
}

PlacementFootprint build_placement_footprint(const ExerciseVolume& volume, const CameraSpec& cam,
                                             Vec2 view_direction, double margin,
                                             double tripod_radius) {
    const double norm = view_direction.norm();
    if (norm <= 0.0) raise(Errc::usage, "view direction must be a non-zero vector");
    const Vec2 dir = view_direction * (1.0 / norm);

    PlacementFootprint fp;
    fp.exercise_region = volume.ellipse;
    fp.view_direction = dir;
    fp.camera_point = volume.ellipse.center - dir * camera_standoff(volume, cam);
    fp.margin = margin;
    fp.tripod_radius = tripod_radius;
    return fp;
}

void save_footprint(const FootprintFile& file, const std::string& path) {
    const geom::Ellipse2D& e = file.footprint.exercise_region;
    json doc = {
        {"exercise_region",
         {{"center", {e.center.x, e.center.y}},
          {"shape_matrix", {{e.a11, e.a12}, {e.a12, e.a22}}},
          {"semi_axes", {e.semi_major(), e.semi_minor()}},
          {"orientation", e.orientation()}}},
        {"height", file.height},
        {"camera_point", {file.footprint.camera_point.x, file.footprint.camera_point.y}},
        {"view_direction", {file.footprint.view_direction.x, file.footprint.view_direction.y}},
        {"margin", file.footprint.margin},
        {"tripod_radius", file.footprint.tripod_radius},
        {"camera",
         {{"hfov", file.camera.hfov},
          {"vfov", file.camera.vfov},
          {"mount_height", file.camera.mount_height}}},
        {"standoff", file.standoff}};
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_failure, "cannot write footprint: " + path);
    out << doc.dump(2) << "\n";
}

FootprintFile load_footprint(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::file_not_found, "cannot open footprint: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("exercise_region"))
        raise(Errc::malformed_record, path + ": expected a footprint JSON document");

    FootprintFile file;
    const json& region = doc["exercise_region"];
    file.footprint.exercise_region.center = {region["center"][0].get<double>(),
                                             region["center"][1].get<double>()};
    file.footprint.exercise_region.a11 = region["shape_matrix"][0][0].get<double>();
    file.footprint.exercise_region.a12 = region["shape_matrix"][0][1].get<double>();
    file.footprint.exercise_region.a22 = region["shape_matrix"][1][1].get<double>();
    file.footprint.camera_point = {doc["camera_point"][0].get<double>(),
                                   doc["camera_point"][1].get<double>()};
    file.footprint.view_direction = {doc["view_direction"][0].get<double>(),
                                     doc["view_direction"][1].get<double>()};
    file.footprint.margin = doc.value("margin", 0.0);
    file.footprint.tripod_radius = doc.value("tripod_radius", 0.35);
    file.height = doc["height"].get<double>();
    file.camera.hfov = doc["camera"]["hfov"].get<double>();
    file.camera.vfov = doc["camera"]["vfov"].get<double>();
    file.camera.mount_height = doc["camera"]["mount_height"].get<double>();
    file.standoff = doc.value("standoff", 0.0);
    return file;
}

}  // namespace airs::footprint
