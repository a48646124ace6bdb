#include "alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "error.hpp"

namespace airs::align {

namespace {

constexpr double kRad2Deg = 180.0 / M_PI;

std::map<std::string, std::vector<std::string>>& synthetic_registry() {
    static std::map<std::string, std::vector<std::string>> synth = {
        {"center_of_hip", {"left_hip", "right_hip"}},
    };
    return synth;
}

std::mutex& synthetic_mutex() {
    static std::mutex m;
    return m;
}

// Resolves a (possibly synthetic) joint to indices into the joint list.
std::vector<int> resolve_joint(const motion::JointSet& set, const std::string& name) {
    const int direct = set.index_of(name);
    if (direct >= 0) return {direct};
    std::lock_guard lock(synthetic_mutex());
    const auto it = synthetic_registry().find(name);
    if (it == synthetic_registry().end())
        raise(Errc::unknown_joint, "unknown joint: " + name);
    std::vector<int> indices;
    for (const std::string& part : it->second) {
        const int idx = set.index_of(part);
        if (idx < 0)
            raise(Errc::unknown_joint, "synthetic joint " + name + " needs missing joint " + part);
        indices.push_back(idx);
    }
    return indices;
}

geom::Vec3 joint_position(const motion::SkeletonFrame& frame, const std::vector<int>& indices) {
    geom::Vec3 acc;
    for (int i : indices) acc = acc + frame.joints[static_cast<size_t>(i)];
    return acc * (1.0 / static_cast<double>(indices.size()));
}

double frame_distance(const JointAngleSeries& ref, size_t i, const JointAngleSeries& query,
                      size_t j, FrameMetric metric) {
    const size_t k = ref.angle_count();
    double acc = 0.0;
    for (size_t a = 0; a < k; ++a) {
        const double d = ref.at(i, a) - query.at(j, a);
        acc += metric == FrameMetric::L2 ? d * d : std::abs(d);
    }
    return metric == FrameMetric::L2 ? std::sqrt(acc) : acc;
}

}  // namespace

void register_synthetic_joint(const std::string& name, std::vector<std::string> components) {
    if (components.empty()) raise(Errc::invalid_config, "synthetic joint needs components");
    std::lock_guard lock(synthetic_mutex());
    synthetic_registry()[name] = std::move(components);
}

std::vector<AngleTriple> default_triples() {
    return {
        {"left_hip", "left_knee", "left_ankle"},      // knees
        {"right_hip", "right_knee", "right_ankle"},
        {"pelvis", "left_hip", "left_knee"},          // hips
        {"pelvis", "right_hip", "right_knee"},
        {"left_knee", "left_ankle", "left_foot"},     // ankles
        {"right_knee", "right_ankle", "right_foot"},
        {"left_shoulder", "left_elbow", "left_wrist"},  // elbows
        {"right_shoulder", "right_elbow", "right_wrist"},
        {"left_elbow", "left_shoulder", "left_hip"},  // shoulders
        {"right_elbow", "right_shoulder", "right_hip"},
        {"neck", "spine2", "pelvis"},                 // trunk
        {"head", "neck", "spine2"},                   // neck
        {"left_ankle", "center_of_hip", "right_ankle"},
    };
}

RegionMap default_region_map() {
    return {
        {"left_knee", "knees/lower leg"},
        {"right_knee", "knees/lower leg"},
        {"left_hip", "hips/pelvis"},
        {"right_hip", "hips/pelvis"},
        {"center_of_hip", "hips/pelvis"},
        {"left_ankle", "ankles/feet"},
        {"right_ankle", "ankles/feet"},
        {"left_elbow", "elbows/forearm"},
        {"right_elbow", "elbows/forearm"},
        {"left_shoulder", "shoulders/upper arm"},
        {"right_shoulder", "shoulders/upper arm"},
        {"spine2", "trunk"},
        {"neck", "neck/head"},
    };
}

JointAngleSeries joint_angles(const motion::SkeletonSequence& seq,
                              const std::vector<AngleTriple>& triples) {
    if (triples.empty()) raise(Errc::invalid_config, "no angle triples given");

    struct Resolved {
        std::vector<int> a, pivot, c;
    };
    std::vector<Resolved> resolved;
    for (const AngleTriple& t : triples)
        resolved.push_back({resolve_joint(*seq.joint_set, t.a), resolve_joint(*seq.joint_set, t.pivot),
                            resolve_joint(*seq.joint_set, t.c)});

    JointAngleSeries series;
    series.triples = triples;
    series.values.reserve(seq.frames.size() * triples.size());
    for (const motion::SkeletonFrame& frame : seq.frames) {
        series.timestamps.push_back(frame.t);
        for (size_t k = 0; k < triples.size(); ++k) {
            const geom::Vec3 pivot = joint_position(frame, resolved[k].pivot);
            const geom::Vec3 u = joint_position(frame, resolved[k].a) - pivot;
            const geom::Vec3 v = joint_position(frame, resolved[k].c) - pivot;
            const double nu = u.norm(), nv = v.norm();
            if (nu < 1e-12 || nv < 1e-12)
                raise(Errc::zero_length_ray,
                      "pivot " + triples[k].pivot + " coincides with an endpoint at t=" +
                          std::to_string(frame.t));
            const double cosine = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
            series.values.push_back(std::acos(cosine) * kRad2Deg);
        }
    }
    return series;
}

AlignmentPath dtw(const JointAngleSeries& ref, const JointAngleSeries& query, FrameMetric metric,
                  std::optional<int> band) {
    if (ref.triples != query.triples)
        raise(Errc::triple_mismatch, "reference and query use different angle triples");
    const int tr = static_cast<int>(ref.frame_count());
    const int tq = static_cast<int>(query.frame_count());
    if (tr == 0 || tq == 0) raise(Errc::empty_input, "dtw needs non-empty series");
    if (band && *band < std::abs(tr - tq))
        raise(Errc::band_too_narrow, "band must be at least |T_ref - T_query|");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(static_cast<size_t>(tr) * tq, kInf);
    auto cell = [&](int i, int j) -> double& { return dp[static_cast<size_t>(i) * tq + j]; };
    auto in_band = [&](int i, int j) { return !band || std::abs(i - j) <= *band; };

    for (int i = 0; i < tr; ++i) {
        for (int j = 0; j < tq; ++j) {
            if (!in_band(i, j)) continue;
            const double d = frame_distance(ref, static_cast<size_t>(i), query,
                                            static_cast<size_t>(j), metric);
            if (i == 0 && j == 0) {
                cell(i, j) = d;
                continue;
            }
            double best = kInf;
            if (i > 0 && j > 0) best = std::min(best, cell(i - 1, j - 1));
            if (i > 0) best = std::min(best, cell(i - 1, j));
            if (j > 0) best = std::min(best, cell(i, j - 1));
            cell(i, j) = d + best;
        }
    }

    AlignmentPath path;
    path.total_cost = cell(tr - 1, tq - 1);

    // Backtrack; ties prefer diagonal, then ref advance, then query advance.
    int i = tr - 1, j = tq - 1;
    std::vector<std::pair<int, int>> rev;
    rev.emplace_back(i, j);
    while (i > 0 || j > 0) {
        double best = kInf;
        int ni = i, nj = j;
        if (i > 0 && j > 0 && cell(i - 1, j - 1) < best) {
            best = cell(i - 1, j - 1);
            ni = i - 1;
            nj = j - 1;
        }
        if (i > 0 && cell(i - 1, j) < best) {
            best = cell(i - 1, j);
            ni = i - 1;
            nj = j;
        }
        if (j > 0 && cell(i, j - 1) < best) {
            best = cell(i, j - 1);
            ni = i;
            nj = j - 1;
        }
        i = ni;
        j = nj;
        rev.emplace_back(i, j);
    }
    path.pairs.assign(rev.rbegin(), rev.rend());
    return path;
}

std::vector<double> deviations(const AlignmentPath& path, const JointAngleSeries& ref,
                               const JointAngleSeries& query, DeviationMetric metric) {
    if (path.pairs.empty()) raise(Errc::empty_input, "empty alignment path");
    const size_t k = ref.angle_count();
    std::vector<double> out;
    out.reserve(path.pairs.size());
    for (const auto& [i, j] : path.pairs) {
        double acc = 0.0;
        for (size_t a = 0; a < k; ++a) {
            const double d = ref.at(static_cast<size_t>(i), a) - query.at(static_cast<size_t>(j), a);
            acc += metric == DeviationMetric::MSE ? d * d : std::abs(d);
        }
        out.push_back(acc / static_cast<double>(k));
    }
    return out;
}

std::vector<std::vector<double>> per_angle_contributions(const AlignmentPath& path,
                                                         const JointAngleSeries& ref,
                                                         const JointAngleSeries& query,
                                                         DeviationMetric metric) {
    const size_t k = ref.angle_count();
    std::vector<std::vector<double>> out;
    out.reserve(path.pairs.size());
    for (const auto& [i, j] : path.pairs) {
        std::vector<double> row(k);
        for (size_t a = 0; a < k; ++a) {
            const double d = ref.at(static_cast<size_t>(i), a) - query.at(static_cast<size_t>(j), a);
            row[a] = metric == DeviationMetric::MSE ? d * d : std::abs(d);
        }
        out.push_back(std::move(row));
    }
    return out;
}

WorstFrameReport worst_frame(const std::vector<double>& dev_list, const AlignmentPath& path,
                             const std::vector<std::vector<double>>& per_angle,
                             const std::vector<AngleTriple>& triples, const RegionMap& region_map) {
    if (dev_list.empty()) raise(Errc::empty_input, "empty deviation list");
    if (dev_list.size() != path.pairs.size() || per_angle.size() != dev_list.size())
        raise(Errc::usage, "deviation list, per-angle list and path must be parallel");

    // Path order is monotone in (ref, query); the first maximum therefore
    // breaks ties toward the earliest ref index.
    size_t best = 0;
    for (size_t i = 1; i < dev_list.size(); ++i)
        if (dev_list[i] > dev_list[best]) best = i;

    WorstFrameReport report;
    report.pair_index = best;
    report.ref_index = path.pairs[best].first;
    report.query_index = path.pairs[best].second;
    report.deviation = dev_list[best];
    report.per_angle = per_angle[best];

    std::map<std::string, double> sums;
    for (size_t k = 0; k < triples.size(); ++k) {
        const auto it = region_map.find(triples[k].pivot);
        const std::string label = it == region_map.end() ? "other" : it->second;
        sums[label] += report.per_angle[k];
    }
    for (const auto& [label, contribution] : sums) report.regions.push_back({label, contribution});
    std::sort(report.regions.begin(), report.regions.end(),
              [](const RegionEntry& a, const RegionEntry& b) {
                  if (a.contribution != b.contribution) return a.contribution > b.contribution;
                  return a.label < b.label;
              });
    return report;
}

}  // namespace airs::align
