#pragma once

#include <string>
#include <vector>

#include "geometry.hpp"

namespace airs::motion {

struct JointSet {
    std::string name;
    std::vector<std::string> joint_names;

    size_t count() const { return joint_names.size(); }
    // Index of a joint name, or -1 when absent.
    int index_of(const std::string& joint) const;
};

// Global registry seeded with the 24-joint "smpl24" set. register_joint_set
// validates uniqueness and the minimum joint count.
const JointSet& joint_set(const std::string& name);
void register_joint_set(JointSet set);

struct SkeletonFrame {
    double t = 0.0;  // seconds
    std::vector<geom::Vec3> joints;
};

struct SkeletonSequence {
    const JointSet* joint_set = nullptr;
    std::vector<SkeletonFrame> frames;
    std::string source_label;
};

// Floor tolerance: the lowest joint of a frame may dip this far below z=0.
inline constexpr double kFloorTolerance = -0.2;

// JSONL: line 0 is {"joint_set":...,"units":"m","frame":"z-up"}; every
// following line is {"t":...,"joints":[[x,y,z],...]}.
SkeletonSequence load_sequence(const std::string& path);
void save_sequence(const SkeletonSequence& seq, const std::string& path);

double max_height(const SkeletonSequence& seq);

}  // namespace airs::motion
