#include <doctest.h>

#include <cmath>
#include <random>

#include "alignment.hpp"
#include "error.hpp"
#include "oracles.hpp"

using airs::Errc;
using airs::Error;
using airs::geom::Vec3;
namespace align = airs::align;
namespace motion = airs::motion;

namespace {

motion::SkeletonSequence frame_sequence(const std::vector<std::vector<Vec3>>& frames) {
    motion::SkeletonSequence seq;
    seq.joint_set = &motion::joint_set("smpl24");
    double t = 0.0;
    for (const auto& joints : frames) {
        motion::SkeletonFrame frame;
        frame.t = t;
        t += 0.1;
        frame.joints = joints;
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

// 1-D series over a dummy triple, values in degrees
align::JointAngleSeries series_1d(const std::vector<double>& values) {
    align::JointAngleSeries s;
    s.triples = {{"a", "p", "c"}};
    for (size_t i = 0; i < values.size(); ++i) {
        s.timestamps.push_back(0.1 * static_cast<double>(i));
        s.values.push_back(values[i]);
    }
    return s;
}

align::JointAngleSeries series_kd(const std::vector<std::vector<double>>& rows,
                                  const std::vector<align::AngleTriple>& triples) {
    align::JointAngleSeries s;
    s.triples = triples;
    for (size_t i = 0; i < rows.size(); ++i) {
        s.timestamps.push_back(0.1 * static_cast<double>(i));
        for (double v : rows[i]) s.values.push_back(v);
    }
    return s;
}

}  // namespace

TEST_CASE("orthogonal rays give 90 degrees, collinear 180") {
    std::vector<Vec3> joints(24, Vec3{0.5, 0.5, 1.0});
    const int pelvis = 0, left_hip = 1, right_hip = 2;
    joints[pelvis] = {0, 0, 0};
    joints[left_hip] = {0, 1, 0};
    joints[right_hip] = {1, 0, 0};
    const motion::SkeletonSequence seq = frame_sequence({joints});

    const align::JointAngleSeries ortho =
        align::joint_angles(seq, {{"left_hip", "pelvis", "right_hip"}});
    CHECK(ortho.at(0, 0) == doctest::Approx(90.0).epsilon(1e-12));

    std::vector<Vec3> line(24, Vec3{0.5, 0.5, 1.0});
    line[pelvis] = {0, 0, 1};
    line[left_hip] = {-1, 0, 1};
    line[right_hip] = {1, 0, 1};
    const align::JointAngleSeries straight = align::joint_angles(
        frame_sequence({line}), {{"left_hip", "pelvis", "right_hip"}});
    CHECK(straight.at(0, 0) == doctest::Approx(180.0).epsilon(1e-12));
}

TEST_CASE("synthetic center_of_hip resolves to the hip midpoint") {
    std::vector<Vec3> joints(24, Vec3{0.3, 0.3, 1.0});
    joints[7] = {0.0, 1.0, 0.0};   // left_ankle
    joints[8] = {0.0, -1.0, 0.0};  // right_ankle
    joints[1] = {1.0, 0.5, 0.0};   // left_hip
    joints[2] = {1.0, -0.5, 0.0};  // right_hip -> center (1, 0, 0)
    const align::JointAngleSeries s = align::joint_angles(
        frame_sequence({joints}), {{"left_ankle", "center_of_hip", "right_ankle"}});
    // rays (-1,1,0) and (-1,-1,0): angle = acos(0/..)=90? dot=1-1=0 -> 90
    CHECK(s.at(0, 0) == doctest::Approx(90.0).epsilon(1e-12));
}

TEST_CASE("unknown joints and zero-length rays are rejected") {
    std::vector<Vec3> joints(24, Vec3{0.1, 0.2, 1.0});
    const motion::SkeletonSequence seq = frame_sequence({joints});
    try {
        align::joint_angles(seq, {{"left_hip", "pelvis", "wing"}});
        FAIL("expected unknown_joint");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unknown_joint);
    }
    // every joint equal: pivot coincides with the endpoints
    try {
        align::joint_angles(seq, {{"left_hip", "pelvis", "right_hip"}});
        FAIL("expected zero_length_ray");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::zero_length_ray);
    }
}

TEST_CASE("joint angles match a long-double arccos oracle") {
    std::mt19937 rng(71);
    std::vector<std::vector<Vec3>> frames;
    for (int f = 0; f < 500; ++f) {
        std::vector<Vec3> joints;
        for (int j = 0; j < 24; ++j)
            joints.push_back({rng() % 2000 / 500.0, rng() % 2000 / 500.0, rng() % 2000 / 1000.0});
        frames.push_back(joints);
    }
    const motion::SkeletonSequence seq = frame_sequence(frames);
    const std::vector<align::AngleTriple> triples = {{"left_hip", "left_knee", "left_ankle"},
                                                     {"head", "neck", "spine2"}};
    const align::JointAngleSeries s = align::joint_angles(seq, triples);

    const auto& set = *seq.joint_set;
    for (size_t f = 0; f < frames.size(); ++f) {
        for (size_t k = 0; k < triples.size(); ++k) {
            const Vec3 a = frames[f][static_cast<size_t>(set.index_of(triples[k].a))];
            const Vec3 p = frames[f][static_cast<size_t>(set.index_of(triples[k].pivot))];
            const Vec3 c = frames[f][static_cast<size_t>(set.index_of(triples[k].c))];
            const long double ux = a.x - p.x, uy = a.y - p.y, uz = a.z - p.z;
            const long double vx = c.x - p.x, vy = c.y - p.y, vz = c.z - p.z;
            const long double dot = ux * vx + uy * vy + uz * vz;
            const long double nu = std::sqrt(ux * ux + uy * uy + uz * uz);
            const long double nv = std::sqrt(vx * vx + vy * vy + vz * vz);
            long double cosv = dot / (nu * nv);
            cosv = std::min<long double>(1.0, std::max<long double>(-1.0, cosv));
            const double expected = static_cast<double>(std::acos(cosv) * 180.0L / M_PIl);
            CHECK(s.at(f, k) == doctest::Approx(expected).epsilon(1e-9));
            CHECK(s.at(f, k) >= 0.0);
            CHECK(s.at(f, k) <= 180.0);
        }
    }
}

TEST_CASE("identical series align on the diagonal with zero cost") {
    const align::JointAngleSeries s = series_1d({10, 40, 95, 30, 70});
    const align::AlignmentPath path = align::dtw(s, s);
    CHECK(path.total_cost == 0.0);
    REQUIRE(path.pairs.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(path.pairs[static_cast<size_t>(i)].first == i);
        CHECK(path.pairs[static_cast<size_t>(i)].second == i);
    }
}

TEST_CASE("the 1-2-3 vs 1-2-2-3 warp is free under L1") {
    const align::JointAngleSeries ref = series_1d({1, 2, 3});
    const align::JointAngleSeries query = series_1d({1, 2, 2, 3});
    const align::AlignmentPath path = align::dtw(ref, query, align::FrameMetric::L1);
    CHECK(path.total_cost == 0.0);
    const std::vector<std::pair<int, int>> expected = {{0, 0}, {1, 1}, {1, 2}, {2, 3}};
    CHECK(path.pairs == expected);
}

TEST_CASE("dtw cost equals exhaustive path enumeration on small series") {
    std::mt19937 rng(73);
    for (int trial = 0; trial < 60; ++trial) {
        const size_t tr = 2 + rng() % 7, tq = 2 + rng() % 7;
        std::vector<double> a(tr), b(tq);
        for (double& v : a) v = rng() % 1800 / 10.0;
        for (double& v : b) v = rng() % 1800 / 10.0;
        const align::JointAngleSeries ref = series_1d(a);
        const align::JointAngleSeries query = series_1d(b);
        for (const align::FrameMetric metric :
             {align::FrameMetric::L2, align::FrameMetric::L1}) {
            const double mine = align::dtw(ref, query, metric).total_cost;
            const double expected = oracle::dtw_cost_by_enumeration(ref, query, metric);
            CHECK(mine == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("dtw cost is symmetric and non-negative") {
    std::mt19937 rng(79);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(5 + rng() % 20), b(5 + rng() % 20);
        for (double& v : a) v = rng() % 1800 / 10.0;
        for (double& v : b) v = rng() % 1800 / 10.0;
        const align::JointAngleSeries ref = series_1d(a);
        const align::JointAngleSeries query = series_1d(b);
        const double ab = align::dtw(ref, query).total_cost;
        const double ba = align::dtw(query, ref).total_cost;
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
    }
}

TEST_CASE("dtw validates triples and band width") {
    const align::JointAngleSeries ref = series_1d({1, 2, 3});
    align::JointAngleSeries other = series_1d({1, 2, 3});
    other.triples = {{"x", "y", "z"}};
    try {
        align::dtw(ref, other);
        FAIL("expected triple_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::triple_mismatch);
    }

    const align::JointAngleSeries query = series_1d({1, 2, 2, 3, 3, 3});
    try {
        align::dtw(ref, query, align::FrameMetric::L2, 1);  // |3-6| = 3 > 1
        FAIL("expected band_too_narrow");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::band_too_narrow);
    }
    // a wide band reproduces the unbanded optimum
    const double full = align::dtw(ref, query).total_cost;
    const double banded = align::dtw(ref, query, align::FrameMetric::L2, 5).total_cost;
    CHECK(banded == doctest::Approx(full));
}

TEST_CASE("deviation arithmetic on a single differing angle") {
    const std::vector<align::AngleTriple> triples(5, {"a", "p", "c"});
    const std::vector<double> base = {100, 90, 80, 70, 60};
    std::vector<double> off = base;
    off[2] += 10.0;
    const align::JointAngleSeries ref = series_kd({base}, triples);
    const align::JointAngleSeries query = series_kd({off}, triples);
    align::AlignmentPath path;
    path.pairs = {{0, 0}};

    const auto mae = align::deviations(path, ref, query, align::DeviationMetric::MAE);
    CHECK(mae[0] == doctest::Approx(2.0).epsilon(1e-12));  // 10/5
    const auto mse = align::deviations(path, ref, query, align::DeviationMetric::MSE);
    CHECK(mse[0] == doctest::Approx(20.0).epsilon(1e-12));  // 100/5

    const auto same = align::deviations(path, ref, ref, align::DeviationMetric::MSE);
    CHECK(same[0] == 0.0);
}

TEST_CASE("deviations match direct recomputation on random pairs") {
    std::mt19937 rng(83);
    const std::vector<align::AngleTriple> triples(4, {"a", "p", "c"});
    std::vector<std::vector<double>> ra(10, std::vector<double>(4)), rb(12, std::vector<double>(4));
    for (auto& row : ra)
        for (double& v : row) v = rng() % 1800 / 10.0;
    for (auto& row : rb)
        for (double& v : row) v = rng() % 1800 / 10.0;
    const align::JointAngleSeries ref = series_kd(ra, triples);
    const align::JointAngleSeries query = series_kd(rb, triples);
    const align::AlignmentPath path = align::dtw(ref, query);
    const auto devs = align::deviations(path, ref, query, align::DeviationMetric::MSE);
    for (size_t k = 0; k < path.pairs.size(); ++k) {
        const auto [i, j] = path.pairs[k];
        double acc = 0.0;
        for (size_t a = 0; a < 4; ++a) {
            const double d =
                ra[static_cast<size_t>(i)][a] - rb[static_cast<size_t>(j)][a];
            acc += d * d;
        }
        CHECK(devs[k] == doctest::Approx(acc / 4.0).epsilon(1e-12));
    }
}

namespace {

// Base series with large inter-frame steps so the identity alignment is
// strictly optimal, plus one injected offset.
void injected_worst_case(std::mt19937& rng, int frames, size_t inject_at, double offset,
                         align::DeviationMetric metric, size_t expected_index) {
    const std::vector<align::AngleTriple> triples = {
        {"left_hip", "left_knee", "left_ankle"},   // pivot left_knee
        {"pelvis", "right_hip", "right_knee"},     // pivot right_hip
        {"head", "neck", "spine2"},                // pivot neck
    };
    std::vector<std::vector<double>> rows;
    double v = 10.0 + rng() % 30;
    for (int f = 0; f < frames; ++f) {
        const double step = 35.0 + rng() % 10;
        v = (f % 2 == 0) ? v + step : v - step * 0.2;
        while (v > 170.0) v -= 120.0;
        std::vector<double> row = {v, 170.0 - v, 0.4 * v + 20.0};
        rows.push_back(row);
    }
    const align::JointAngleSeries ref = series_kd(rows, triples);
    std::vector<std::vector<double>> off_rows = rows;
    off_rows[inject_at][0] += offset;  // knee angle
    const align::JointAngleSeries query = series_kd(off_rows, triples);

    const align::AlignmentPath path = align::dtw(ref, query);
    const auto devs = align::deviations(path, ref, query, metric);
    const auto per_angle = align::per_angle_contributions(path, ref, query, metric);
    const align::WorstFrameReport report =
        align::worst_frame(devs, path, per_angle, triples);

    CHECK(report.pair_index == expected_index);
    CHECK(report.ref_index == static_cast<int>(inject_at));
    CHECK(report.query_index == static_cast<int>(inject_at));
    REQUIRE_FALSE(report.regions.empty());
    CHECK(report.regions[0].label == "knees/lower leg");
}

}  // namespace

TEST_CASE("worst_frame finds the injected offset for both metrics") {
    std::mt19937 rng(89);
    injected_worst_case(rng, 20, 7, 15.0, align::DeviationMetric::MSE, 7);
    injected_worst_case(rng, 20, 7, 15.0, align::DeviationMetric::MAE, 7);
    injected_worst_case(rng, 16, 11, -12.0, align::DeviationMetric::MSE, 11);
}

TEST_CASE("all-zero deviations pick the first pair") {
    const align::JointAngleSeries s = series_1d({30, 60, 90});
    const align::AlignmentPath path = align::dtw(s, s);
    const auto devs = align::deviations(path, s, s, align::DeviationMetric::MSE);
    const auto per_angle = align::per_angle_contributions(path, s, s, align::DeviationMetric::MSE);
    const align::WorstFrameReport report = align::worst_frame(devs, path, per_angle, s.triples);
    CHECK(report.ref_index == 0);
    CHECK(report.query_index == 0);
}

TEST_CASE("worst_frame argmax is scale invariant") {
    std::mt19937 rng(97);
    const align::JointAngleSeries s = series_1d({30, 60, 90, 120, 20});
    align::JointAngleSeries q = s;
    q.values[3] += 25.0;
    const align::AlignmentPath path = align::dtw(s, q);
    auto devs = align::deviations(path, s, q, align::DeviationMetric::MAE);
    auto per_angle = align::per_angle_contributions(path, s, q, align::DeviationMetric::MAE);
    const auto base = align::worst_frame(devs, path, per_angle, s.triples);
    for (double& d : devs) d *= 37.5;
    const auto scaled = align::worst_frame(devs, path, per_angle, s.triples);
    CHECK(base.pair_index == scaled.pair_index);
}

TEST_CASE("the default triple set has 13 entries resolvable in smpl24") {
    const auto triples = align::default_triples();
    CHECK(triples.size() == 13);
    std::vector<Vec3> joints;
    for (int i = 0; i < 24; ++i)
        joints.push_back({0.1 * i, 0.05 * ((i * 7) % 5), 0.08 * ((i * 3) % 11)});
    const align::JointAngleSeries s = align::joint_angles(frame_sequence({joints}), triples);
    CHECK(s.angle_count() == 13);
}
