// Regenerates the bundled demo fixture set: a synthetic living room point
// cloud, two synthetic squat recordings (clinic + home with a shallow-squat
// error), an exercise spec, a pose stream, semantic labels, embeddings, and
// the replay cache that lets `prompt`/`evaluate` run offline.
//
// Everything is deterministic; rerunning reproduces identical bytes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "alignment.hpp"
#include "env.hpp"
#include "feedback.hpp"
#include "motion.hpp"

namespace fs = std::filesystem;
using airs::geom::Vec3;
using nlohmann::json;

namespace {

constexpr double kRoomX = 7.45;  // walls inset so the grid is exactly 149x109 cells
constexpr double kRoomY = 5.45;
constexpr double kWallInset = 0.025;

struct Box {
    double x0, y0, x1, y1;
    double z_top;
    const char* label;
};

const std::vector<Box> kFurniture = {
    {0.30, 4.60, 2.30, 5.30, 0.95, "sofa"},
    {5.90, 0.40, 6.90, 1.60, 0.95, "table"},
    {0.30, 2.60, 0.80, 4.40, 1.55, "shelf"},
};

void write_room_ply(const std::string& path, airs::env::PointCloud& cloud) {
    auto add = [&](double x, double y, double z) { cloud.points.push_back({x, y, z}); };

    const double step = 0.05, offset = 0.025;
    // perimeter walls, four height levels inside the projection band
    for (double s = offset; s < kRoomX; s += step) {
        for (double z = 0.3; z <= 1.25; z += 0.3) {
            add(s, kWallInset, z);
            add(s, kRoomY - kWallInset, z);
        }
    }
    for (double s = offset; s < kRoomY; s += step) {
        for (double z = 0.3; z <= 1.25; z += 0.3) {
            add(kWallInset, s, z);
            add(kRoomX - kWallInset, s, z);
        }
    }
    // furniture volumes
    for (const Box& box : kFurniture) {
        for (double x = box.x0 + offset; x < box.x1; x += step) {
            for (double y = box.y0 + offset; y < box.y1; y += step) {
                for (double z = 0.3; z <= box.z_top; z += 0.3) add(x, y, z);
            }
        }
    }
    // floor and ceiling returns outside the band (they must be ignored)
    for (double x = 0.2; x < kRoomX; x += 0.5) {
        for (double y = 0.2; y < kRoomY; y += 0.5) {
            add(x, y, 0.02);
            add(x, y, 2.35);
        }
    }

    std::ofstream out(path, std::ios::binary);
    out << "ply\nformat ascii 1.0\ncomment synthetic living room\n";
    out << "element vertex " << cloud.points.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\nend_header\n";
    char line[96];
    for (const Vec3& p : cloud.points) {
        std::snprintf(line, sizeof(line), "%.3f %.3f %.3f\n", p.x, p.y, p.z);
        out << line;
    }
}

// Squat kinematics around the origin, body facing +x, z up. s in [0,1] is
// the squat depth; a small deterministic wobble keeps the data non-ideal.
airs::motion::SkeletonFrame squat_frame(double t, double s) {
    const double hip_z = 0.95 - 0.38 * s;
    const double fwd = 0.28 * s;       // knees travel forward
    const double lean = 0.16 * s;      // torso leans into the squat
    const double arms = s;             // arms raise forward for balance

    auto wob = [&](int k) { return 0.004 * std::sin(5.0 * t + 1.7 * k); };

    std::vector<Vec3> j(24);
    const Vec3 pelvis{lean * 0.3 + wob(0), wob(1), hip_z + 0.05};
    j[0] = pelvis;
    j[1] = pelvis + Vec3{0.0, 0.10, -0.05};   // left_hip
    j[2] = pelvis + Vec3{0.0, -0.10, -0.05};  // right_hip
    j[3] = pelvis + Vec3{lean * 0.4, 0.0, 0.12};  // spine1
    j[4] = Vec3{fwd + wob(4), 0.11, 0.50 - 0.06 * s};   // left_knee
    j[5] = Vec3{fwd + wob(5), -0.11, 0.50 - 0.06 * s};  // right_knee
    j[6] = j[3] + Vec3{lean * 0.4, 0.0, 0.12};          // spine2
    j[7] = Vec3{0.02, 0.12, 0.08};                       // left_ankle
    j[8] = Vec3{0.02, -0.12, 0.08};                      // right_ankle
    j[9] = j[6] + Vec3{lean * 0.2, 0.0, 0.10};           // spine3
    j[10] = Vec3{0.18, 0.12, 0.02};                      // left_foot
    j[11] = Vec3{0.18, -0.12, 0.02};                     // right_foot
    j[12] = j[9] + Vec3{0.0, 0.0, 0.10};                 // neck
    j[13] = j[9] + Vec3{0.02, 0.07, 0.05};               // left_collar
    j[14] = j[9] + Vec3{0.02, -0.07, 0.05};              // right_collar
    j[15] = j[12] + Vec3{0.03, 0.0, 0.14};               // head
    j[16] = j[9] + Vec3{0.02, 0.19, 0.04};               // left_shoulder
    j[17] = j[9] + Vec3{0.02, -0.19, 0.04};              // right_shoulder
    j[18] = j[16] + Vec3{0.10 + 0.14 * arms, 0.01, -0.22 * (1.0 - 0.85 * arms)};  // left_elbow
    j[19] = j[17] + Vec3{0.10 + 0.14 * arms, -0.01, -0.22 * (1.0 - 0.85 * arms)};
    j[20] = j[18] + Vec3{0.08 + 0.16 * arms, 0.0, -0.16 * (1.0 - arms)};  // left_wrist
    j[21] = j[19] + Vec3{0.08 + 0.16 * arms, 0.0, -0.16 * (1.0 - arms)};
    j[22] = j[20] + Vec3{0.06, 0.01, -0.01};  // left_hand
    j[23] = j[21] + Vec3{0.06, -0.01, -0.01};

    airs::motion::SkeletonFrame frame;
    frame.t = t;
    frame.joints = std::move(j);
    return frame;
}

airs::motion::SkeletonSequence make_clinic() {
    airs::motion::SkeletonSequence seq;
    seq.joint_set = &airs::motion::joint_set("smpl24");
    seq.source_label = "clinic";
    for (int i = 0; i < 60; ++i) {
        const double t = 0.1 * i;
        const double s = std::pow(std::sin(M_PI * t / 3.0), 2);
        seq.frames.push_back(squat_frame(t, s));
    }
    return seq;
}

airs::motion::SkeletonSequence make_home() {
    airs::motion::SkeletonSequence seq;
    seq.joint_set = &airs::motion::joint_set("smpl24");
    seq.source_label = "home";
    for (int i = 0; i < 72; ++i) {
        const double t = 0.08 * i;
        // time-warped phase plus the typical error: the squat stays shallow
        const double u = t * (5.9 / 5.68) + 0.22 * std::sin(2.0 * M_PI * t / 5.68);
        const double s = std::min(std::pow(std::sin(M_PI * u / 3.0), 2), 0.55);
        seq.frames.push_back(squat_frame(t, s));
    }
    return seq;
}

void write_exercise_spec(const std::string& path) {
    json doc = {
        {"id", "squat-tkr"},
        {"description",
         "Bodyweight squat for knee rehabilitation. Stand with feet shoulder-width apart, "
         "bend the knees to lower the hips as far as comfortable while keeping the heels "
         "on the floor, then return to standing."},
        {"error_list",
         json::array(
             {{{"code", "E1"}, {"description", "does not bend the knees deeply enough"}},
              {{"code", "E2"}, {"description", "knees cave inward during the descent"}},
              {{"code", "E3"}, {"description", "heels lift off the floor at the bottom"}},
              {{"code", "E4"}, {"description", "torso leans too far forward"}}})},
        {"body_regions",
         json::array({{{"label", "knees"}, {"joints", {"left_knee", "right_knee"}}},
                      {{"label", "hips"}, {"joints", {"pelvis", "left_hip", "right_hip"}}},
                      {{"label", "ankles and feet"},
                       {"joints", {"left_ankle", "right_ankle", "left_foot", "right_foot"}}},
                      {{"label", "trunk"}, {"joints", {"spine1", "spine2", "spine3", "neck"}}}})}};
    std::ofstream(path) << doc.dump(2) << "\n";
}

constexpr const char* kGroundTruth =
    "Bend your knees more deeply so your hips sink lower, keeping both heels on the floor.";

constexpr const char* kGoodResponse =
    "Your squat stays too shallow. Bend your knees further and let your hips drop lower "
    "before standing back up.";

constexpr const char* kPoorResponse =
    "Keep your back straighter and look ahead while performing the exercise.";

constexpr const char* kJudgeYes =
    "YES. Both instructions tell the patient to deepen the knee bend and lower the hips.";

constexpr const char* kJudgeNo =
    "NO. The generated instruction addresses back posture, not the shallow knee bend.";

void write_replay(const fs::path& dir, const airs::motion::SkeletonSequence& clinic,
                  const airs::motion::SkeletonSequence& home,
                  const airs::feedback::ExerciseSpec& spec) {
    const auto triples = airs::align::default_triples();
    const auto ref = airs::align::joint_angles(clinic, triples);
    const auto query = airs::align::joint_angles(home, triples);
    const auto path = airs::align::dtw(ref, query, airs::align::FrameMetric::L2);
    const auto devs =
        airs::align::deviations(path, ref, query, airs::align::DeviationMetric::MSE);
    const auto per_angle = airs::align::per_angle_contributions(
        path, ref, query, airs::align::DeviationMetric::MSE);
    const auto worst = airs::align::worst_frame(devs, path, per_angle, triples);

    const auto& ref_frame = clinic.frames[static_cast<size_t>(worst.ref_index)];
    const auto& query_frame = home.frames[static_cast<size_t>(worst.query_index)];
    const std::vector<airs::feedback::ImageRef> refs = {{"clinic", worst.ref_index},
                                                        {"home", worst.query_index}};
    const auto& names = clinic.joint_set->joint_names;

    auto write = [&](const std::string& hash, const char* text) {
        std::ofstream(dir / (hash + ".txt"), std::ios::binary) << text;
    };

    for (const airs::feedback::PromptConfig& cell :
         airs::feedback::ablation_grid("Let's think step by step.")) {
        const bool skeleton = cell.input_mode != airs::feedback::InputMode::image;
        const bool image = cell.input_mode != airs::feedback::InputMode::skeleton;
        const auto bundle = airs::feedback::build_prompt(
            spec, cell, skeleton ? std::optional(ref_frame) : std::nullopt,
            skeleton ? std::optional(query_frame) : std::nullopt,
            image ? refs : std::vector<airs::feedback::ImageRef>{}, names);

        // hinted non-image-only prompts succeed; the rest miss the error
        const bool good = skeleton && (cell.use_error_list || cell.use_body_regions);
        write(bundle.content_hash(), good ? kGoodResponse : kPoorResponse);
    }

    write(airs::feedback::judge_bundle(kGoodResponse, kGroundTruth).content_hash(), kJudgeYes);
    write(airs::feedback::judge_bundle(kPoorResponse, kGroundTruth).content_hash(), kJudgeNo);
}

void write_embeddings(const fs::path& dir) {
    constexpr int kDim = 64, kCount = 12;
    auto matrix = [&](auto&& value) {
        airs::feedback::EmbeddingMatrix m;
        m.dim = kDim;
        m.count = kCount;
        for (int i = 0; i < kCount; ++i)
            for (int k = 0; k < kDim; ++k) m.values.push_back(static_cast<float>(value(i, k)));
        return m;
    };
    auto truth = [](int, int k) { return std::sin(0.37 * k + 1.0); };

    airs::feedback::save_embeddings(matrix(truth), (dir / "ground_truth").string());
    airs::feedback::save_embeddings(
        matrix([&](int i, int k) { return truth(i, k) + 0.05 * std::sin(0.91 * k + 1.3 * i); }),
        (dir / "gpt4v").string());
    airs::feedback::save_embeddings(
        matrix([](int i, int k) { return std::sin(1.31 * k + 2.71 * i + 0.5); }),
        (dir / "llava16").string());
}

void write_labels(const std::string& path, const airs::env::OccupancyGrid& grid) {
    json labels = json::array();
    auto add = [&](double x0, double y0, double x1, double y1, const char* label) {
        const auto [c0, r0] = grid.cell_of({x0 + 0.01, y0 + 0.01});
        const auto [c1, r1] = grid.cell_of({x1 - 0.01, y1 - 0.01});
        labels.push_back({{"cell_min", {c0, r0}}, {"cell_max", {c1, r1}}, {"label", label}});
    };
    for (const Box& box : kFurniture) add(box.x0, box.y0, box.x1, box.y1, box.label);
    add(1.5, 0.8, 2.5, 1.8, "rug");  // free-floor label near the exercise corner
    std::ofstream(path) << json{{"labels", labels}}.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path dir = argc > 1 ? argv[1] : "demo";
    fs::create_directories(dir);
    fs::create_directories(dir / "replay");
    fs::create_directories(dir / "embeddings");

    airs::env::PointCloud cloud;
    write_room_ply((dir / "room.ply").string(), cloud);

    const auto clinic = make_clinic();
    const auto home = make_home();
    airs::motion::save_sequence(clinic, (dir / "clinic.jsonl").string());
    airs::motion::save_sequence(home, (dir / "home.jsonl").string());

    write_exercise_spec((dir / "exercise_squat.json").string());
    std::ofstream((dir / "ground_truth.json").string())
        << json{{"exercise_id", "squat-tkr"}, {"text", kGroundTruth}}.dump(2) << "\n";

    std::ofstream poses((dir / "poses.jsonl").string());
    poses << json{{"t", 0.0}, {"x", 5.3}, {"y", 4.2}, {"heading", 0.3}}.dump() << "\n";
    poses << json{{"t", 4.0}, {"x", 3.6}, {"y", 2.8}, {"heading", -2.2}}.dump() << "\n";
    poses << json{{"t", 8.0}, {"x", 2.0}, {"y", 1.4}, {"heading", -1.0}}.dump() << "\n";
    poses.close();

    const airs::env::OccupancyGrid grid = airs::env::project_occupancy(cloud, 0.05, 0.10, 2.00, 3);
    write_labels((dir / "labels.json").string(), grid);

    const auto spec = airs::feedback::load_exercise_spec((dir / "exercise_squat.json").string());
    write_replay(dir / "replay", clinic, home, spec);
    write_embeddings(dir / "embeddings");

    std::ofstream toml((dir / "airs.toml").string());
    toml << "# Demo configuration: offline transports wired to the bundled replay cache.\n"
            "# Paths are relative to the repository root.\n"
            "feedback-transport = \"replay\"\n"
            "feedback-replay-dir = \"demo/replay\"\n"
            "judge-transport = \"replay\"\n"
            "judge-replay-dir = \"demo/replay\"\n"
            "nav-labels-path = \"demo/labels.json\"\n";
    toml.close();

    std::cout << "demo fixtures written to " << dir.string() << "\n";
    return 0;
}
