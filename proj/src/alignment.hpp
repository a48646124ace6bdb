#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "motion.hpp"

namespace airs::align {

// Angle at `pivot` between the rays pivot->a and pivot->c. Names may refer to
// synthetic joints (e.g. "center_of_hip").
struct AngleTriple {
    std::string a;
    std::string pivot;
    std::string c;

    bool operator==(const AngleTriple&) const = default;
};

struct JointAngleSeries {
    std::vector<AngleTriple> triples;
    std::vector<double> timestamps;
    std::vector<double> values;  // frame-major, degrees in [0, 180]

    size_t frame_count() const { return timestamps.size(); }
    size_t angle_count() const { return triples.size(); }
    double at(size_t frame, size_t k) const { return values[frame * triples.size() + k]; }
};

struct AlignmentPath {
    std::vector<std::pair<int, int>> pairs;  // (ref_index, query_index)
    double total_cost = 0.0;
};

enum class FrameMetric { L2, L1 };
enum class DeviationMetric { MSE, MAE };

struct RegionEntry {
    std::string label;
    double contribution = 0.0;
};

struct WorstFrameReport {
    size_t pair_index = 0;  // position along the alignment path
    int ref_index = 0;
    int query_index = 0;
    double deviation = 0.0;
    std::vector<double> per_angle;
    std::vector<RegionEntry> regions;  // ranked by contribution
};

// Synthetic joints resolve to the mean of real joints; the registry is
// seeded with center_of_hip = {left_hip, right_hip}.
void register_synthetic_joint(const std::string& name, std::vector<std::string> components);

// The 13 default triples: knees, hips, ankles, elbows, shoulders (both
// sides), trunk, neck, and left_ankle - center_of_hip - right_ankle.
std::vector<AngleTriple> default_triples();

// Maps a triple's pivot joint to a body-region label.
using RegionMap = std::map<std::string, std::string>;
RegionMap default_region_map();

JointAngleSeries joint_angles(const motion::SkeletonSequence& seq,
                              const std::vector<AngleTriple>& triples);

// Full dynamic program over steps {(1,0),(0,1),(1,1)}; band (when given) is a
// Sakoe-Chiba window in cells and must be at least |T_ref - T_query|.
AlignmentPath dtw(const JointAngleSeries& ref, const JointAngleSeries& query,
                  FrameMetric metric = FrameMetric::L2, std::optional<int> band = std::nullopt);

// Per-pair deviation along the path: mean over angles of squared (MSE) or
// absolute (MAE) differences, in degrees^2 / degrees.
std::vector<double> deviations(const AlignmentPath& path, const JointAngleSeries& ref,
                               const JointAngleSeries& query, DeviationMetric metric);

// Per-pair per-angle contributions (squared or absolute differences).
std::vector<std::vector<double>> per_angle_contributions(const AlignmentPath& path,
                                                         const JointAngleSeries& ref,
                                                         const JointAngleSeries& query,
                                                         DeviationMetric metric);

WorstFrameReport worst_frame(const std::vector<double>& dev_list, const AlignmentPath& path,
                             const std::vector<std::vector<double>>& per_angle,
                             const std::vector<AngleTriple>& triples,
                             const RegionMap& region_map = default_region_map());

}  // namespace airs::align
