#include "motion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>

#include <json.hpp>

#include "error.hpp"

namespace airs::motion {

namespace {

using nlohmann::json;

constexpr size_t kMinJointCount = 15;

std::map<std::string, JointSet>& registry() {
    static std::map<std::string, JointSet> sets = {
        {"smpl24",
         {"smpl24",
          {"pelvis",        "left_hip",      "right_hip",      "spine1",
           "left_knee",     "right_knee",    "spine2",         "left_ankle",
           "right_ankle",   "spine3",        "left_foot",      "right_foot",
           "neck",          "left_collar",   "right_collar",   "head",
           "left_shoulder", "right_shoulder", "left_elbow",    "right_elbow",
           "left_wrist",    "right_wrist",   "left_hand",      "right_hand"}}},
    };
    return sets;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

int JointSet::index_of(const std::string& joint) const {
    const auto it = std::find(joint_names.begin(), joint_names.end(), joint);
    return it == joint_names.end() ? -1 : static_cast<int>(it - joint_names.begin());
}

const JointSet& joint_set(const std::string& name) {
    std::lock_guard lock(registry_mutex());
    const auto it = registry().find(name);
    if (it == registry().end()) raise(Errc::unknown_joint_set, "unknown joint set: " + name);
    return it->second;
}

void register_joint_set(JointSet set) {
    if (set.count() < kMinJointCount)
        raise(Errc::invalid_config, "joint set needs at least 15 joints: " + set.name);
    std::set<std::string> unique(set.joint_names.begin(), set.joint_names.end());
    if (unique.size() != set.count())
        raise(Errc::invalid_config, "joint set has duplicate names: " + set.name);
    std::lock_guard lock(registry_mutex());
    registry()[set.name] = std::move(set);
}

SkeletonSequence load_sequence(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::file_not_found, "cannot open sequence file: " + path);

    std::string line;
    if (!std::getline(in, line))
        raise(Errc::malformed_record, path + ": empty file, expected a header line");

    json header = json::parse(line, nullptr, false);
    if (header.is_discarded() || !header.is_object() || !header.contains("joint_set"))
        raise(Errc::malformed_record, path + ": header must be an object naming joint_set");
    const JointSet& set = joint_set(header["joint_set"].get<std::string>());

    SkeletonSequence seq;
    seq.joint_set = &set;
    if (header.contains("source_label")) seq.source_label = header["source_label"].get<std::string>();

    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);

        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object() || !rec.contains("t") || !rec.contains("joints"))
            raise(Errc::malformed_record, where + ": expected {t, joints}");

        SkeletonFrame frame;
        frame.t = rec["t"].get<double>();
        if (!std::isfinite(frame.t) || frame.t < 0.0)
            raise(Errc::malformed_record, where + ": timestamp must be finite and non-negative");

        const json& joints = rec["joints"];
        if (!joints.is_array() || joints.size() != set.count())
            raise(Errc::malformed_record,
                  where + ": expected " + std::to_string(set.count()) + " joints, got " +
                      std::to_string(joints.is_array() ? joints.size() : 0));

        double min_z = std::numeric_limits<double>::max();
        for (const json& j : joints) {
            if (!j.is_array() || j.size() != 3)
                raise(Errc::malformed_record, where + ": joint must be [x,y,z]");
            geom::Vec3 p{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
                raise(Errc::malformed_record, where + ": non-finite joint coordinate");
            min_z = std::min(min_z, p.z);
            frame.joints.push_back(p);
        }
        if (min_z < kFloorTolerance)
            raise(Errc::malformed_record,
                  where + ": lowest joint " + std::to_string(min_z) + " m below floor tolerance");

        if (!seq.frames.empty() && frame.t <= seq.frames.back().t)
            raise(Errc::non_monotonic_timestamps,
                  where + ": timestamps must be strictly increasing");
        seq.frames.push_back(std::move(frame));
    }

    if (seq.frames.empty()) raise(Errc::malformed_record, path + ": sequence has no frames");
    return seq;
}

void save_sequence(const SkeletonSequence& seq, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_failure, "cannot write sequence file: " + path);

    json header = {{"joint_set", seq.joint_set->name}, {"units", "m"}, {"frame", "z-up"}};
    if (!seq.source_label.empty()) header["source_label"] = seq.source_label;
    out << header.dump() << "\n";

    for (const SkeletonFrame& f : seq.frames) {
        json joints = json::array();
        for (const geom::Vec3& p : f.joints) joints.push_back({p.x, p.y, p.z});
        out << json{{"t", f.t}, {"joints", joints}}.dump() << "\n";
    }
    if (!out) raise(Errc::io_failure, "write failed: " + path);
}

double max_height(const SkeletonSequence& seq) {
    if (seq.frames.empty()) raise(Errc::empty_input, "max_height on empty sequence");
    double top = -std::numeric_limits<double>::max();
    for (const SkeletonFrame& f : seq.frames)
        for (const geom::Vec3& p : f.joints) top = std::max(top, p.z);
    return top;
}

}  // namespace airs::motion
