#pragma once

#include <span>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "motion.hpp"

namespace airs::footprint {

struct ExerciseVolume {
    geom::Ellipse2D ellipse;
    double height = 0.0;  // meters
};

struct CameraSpec {
    double hfov = 0.0;          // radians
    double vfov = 0.0;          // radians
    double mount_height = 0.0;  // tripod height, meters
};

struct PlacementFootprint {
    geom::Ellipse2D exercise_region;
    geom::Vec2 camera_point;
    geom::Vec2 view_direction;  // unit, camera toward ellipse center
    double margin = 0.0;
    double tripod_radius = 0.35;

    // Exercise ellipse plus the camera/sight capsule (segment from the
    // ellipse center to the camera point, radius = tripod_radius).
    bool contains(geom::Vec2 p) const;
    PlacementFootprint rotated_about_center(double angle) const;
};

// xy of every joint of every frame of every sequence.
std::vector<geom::Vec2> floor_projection(std::span<const motion::SkeletonSequence> seqs);

// Enclosing ellipse of the floor projection dilated by margin; height is the
// sequences' peak joint height plus margin. Near-point footprints are
// inflated to a 1 cm disc before fitting.
ExerciseVolume exercise_volume(std::span<const motion::SkeletonSequence> seqs, double margin,
                               double mvee_tol = 1e-6, int mvee_max_iters = 10000);

// Minimal camera-to-center distance so a bounding cylinder (radius = major
// semi-axis, height = volume height) fits the camera frustum:
//   d = R + max(R / tan(hfov/2), max(H - mount, mount) / tan(vfov/2))
double camera_standoff(const ExerciseVolume& volume, const CameraSpec& cam);

PlacementFootprint build_placement_footprint(const ExerciseVolume& volume, const CameraSpec& cam,
                                             geom::Vec2 view_direction, double margin = 0.0,
                                             double tripod_radius = 0.35);

struct FootprintFile {
    PlacementFootprint footprint;
    double height = 0.0;
    CameraSpec camera;
    double standoff = 0.0;
};

void save_footprint(const FootprintFile& file, const std::string& path);
FootprintFile load_footprint(const std::string& path);

}  // namespace airs::footprint
