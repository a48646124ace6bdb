#include "pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "alignment.hpp"
#include "env.hpp"
#include "error.hpp"
#include "feedback.hpp"
#include "footprint.hpp"
#include "motion.hpp"
#include "navigation.hpp"
#include "placement.hpp"

namespace airs::pipeline {

namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::io_failure, "cannot write output: " + path);
    out << content;
    if (!out) raise(Errc::io_failure, "write failed: " + path);
}

void write_json(const std::string& path, const json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

json frame_json(const motion::SkeletonFrame& frame) {
    json joints = json::array();
    for (const geom::Vec3& p : frame.joints) joints.push_back({p.x, p.y, p.z});
    return {{"t", frame.t}, {"joints", joints}};
}

motion::SkeletonFrame frame_from_json(const json& doc) {
    motion::SkeletonFrame frame;
    frame.t = doc["t"].get<double>();
    for (const json& j : doc["joints"])
        frame.joints.push_back({j[0].get<double>(), j[1].get<double>(), j[2].get<double>()});
    return frame;
}

}  // namespace

void run_project(const PipelineConfig& config, const std::string& cloud_path,
                 const std::string& out_path) {
    const env::PointCloud cloud = env::load_point_cloud(cloud_path);
    const env::OccupancyGrid grid = env::project_occupancy(
        cloud, config.grid_resolution, config.z_min, config.z_max, config.min_hits);
    env::save_grid(grid, out_path);
}

void run_footprint(const PipelineConfig& config, const std::vector<std::string>& sequence_paths,
                   const std::string& out_path) {
    if (sequence_paths.empty()) raise(Errc::empty_input, "no sequence files given");
    std::vector<motion::SkeletonSequence> seqs;
    for (const std::string& path : sequence_paths) seqs.push_back(motion::load_sequence(path));

    const footprint::ExerciseVolume volume =
        footprint::exercise_volume(seqs, config.margin, config.mvee_tol, config.mvee_max_iters);
    const footprint::CameraSpec cam = config.camera();

    footprint::FootprintFile file;
    file.footprint = footprint::build_placement_footprint(volume, cam, {1.0, 0.0}, config.margin,
                                                          config.tripod_radius);
    file.height = volume.height;
    file.camera = cam;
    file.standoff = footprint::camera_standoff(volume, cam);
    footprint::save_footprint(file, out_path);
}

void run_place(const PipelineConfig& config, const std::string& grid_path,
               const std::string& footprint_path, const std::string& out_path) {
    const env::OccupancyGrid grid = env::load_grid(grid_path);
    const footprint::FootprintFile file = footprint::load_footprint(footprint_path);

    placement::PlanParams params;
    params.rotation_count = config.rotations;
    params.score_cap = config.score_cap;
    params.max_alternatives = static_cast<size_t>(config.max_alternatives);
    if (config.user_x && config.user_y)
        params.user_position = geom::Vec2{*config.user_x, *config.user_y};

    const placement::PlacementPlan plan = placement::plan(grid, file, params);
    placement::save_plan(plan, out_path);

    if (!config.debug_overlay.empty()) {
        const placement::BinaryMask mask = placement::rasterize(
            file.footprint.rotated_about_center(plan.best.rotation), grid.resolution);
        placement::save_plan_overlay(grid, plan, mask, config.debug_overlay);
    }
}

namespace {

json instruction_json(const nav::Instruction& ins) {
    json doc;
    switch (ins.kind) {
    case nav::InstructionKind::turn:
        doc["kind"] = "turn";
        doc["turn_degrees"] = ins.turn_degrees;
        doc["raw_turn_degrees"] = ins.raw_turn_degrees;
        break;
    case nav::InstructionKind::walk:
        doc["kind"] = "walk";
        doc["walk_meters"] = ins.walk_meters;
        doc["raw_walk_meters"] = ins.raw_walk_meters;
        break;
    case nav::InstructionKind::arrive:
        doc["kind"] = "arrive";
        break;
    }
    doc["text"] = ins.text;
    if (!ins.landmark.empty()) doc["landmark"] = ins.landmark;
    return doc;
}

}  // namespace

void run_navigate(const PipelineConfig& config, const std::string& grid_path,
                  const std::string& plan_path, const std::string& pose_stream_path,
                  const std::string& out_path, const std::string& text_path) {
    const env::OccupancyGrid raw_grid = env::load_grid(grid_path);
    const env::OccupancyGrid grid = nav::inflate(raw_grid, config.inflation_radius);
    const placement::PlacementPlan plan = placement::load_plan(plan_path);
    const std::vector<nav::PoseRecord> poses = nav::load_pose_stream(pose_stream_path);

    std::vector<nav::Landmark> landmarks;
    if (!config.labels_path.empty()) {
        const env::SemanticLabelMap map = env::load_label_map(config.labels_path);
        env::validate_label_map(map, raw_grid);
        landmarks = nav::landmarks_from_map(map, raw_grid);
    }

    const geom::Vec2 goal = plan.patient_pose.position;
    json replans = json::array();
    std::ostringstream text;
    bool first = true;
    for (const nav::PoseRecord& record : poses) {
        const std::vector<nav::Instruction> steps =
            nav::replan(grid, record.pose, goal, landmarks);
        json list = json::array();
        for (const nav::Instruction& ins : steps) list.push_back(instruction_json(ins));
        replans.push_back({{"t", record.t},
                           {"pose",
                            {{"x", record.pose.position.x},
                             {"y", record.pose.position.y},
                             {"heading", record.pose.heading}}},
                           {"instructions", list}});
        if (!first) text << "\n";
        first = false;
        for (const nav::Instruction& ins : steps) text << ins.text << "\n";
    }

    write_json(out_path, json{{"goal", {goal.x, goal.y}}, {"replans", replans}});
    if (!text_path.empty()) write_text(text_path, text.str());
}

void run_align(const PipelineConfig& config, const std::string& ref_path,
               const std::string& query_path, const std::string& out_path,
               const std::string& csv_path) {
    const motion::SkeletonSequence ref_seq = motion::load_sequence(ref_path);
    const motion::SkeletonSequence query_seq = motion::load_sequence(query_path);
    const std::vector<align::AngleTriple> triples = config.triples();

    const align::JointAngleSeries ref = align::joint_angles(ref_seq, triples);
    const align::JointAngleSeries query = align::joint_angles(query_seq, triples);

    std::optional<int> band;
    if (config.band > 0) band = config.band;
    const align::AlignmentPath path = align::dtw(ref, query, config.frame_metric, band);
    const std::vector<double> devs =
        align::deviations(path, ref, query, config.deviation_metric);
    const auto per_angle =
        align::per_angle_contributions(path, ref, query, config.deviation_metric);
    const align::WorstFrameReport worst =
        align::worst_frame(devs, path, per_angle, triples);

    json pairs = json::array();
    for (const auto& [i, j] : path.pairs) pairs.push_back({i, j});
    json triples_json = json::array();
    for (const align::AngleTriple& t : triples) triples_json.push_back({t.a, t.pivot, t.c});
    json regions = json::array();
    for (const align::RegionEntry& r : worst.regions)
        regions.push_back({{"label", r.label}, {"contribution", r.contribution}});

    json doc = {
        {"ref_label", ref_seq.source_label},
        {"query_label", query_seq.source_label},
        {"frame_metric", config.frame_metric == align::FrameMetric::L2 ? "L2" : "L1"},
        {"deviation_metric",
         config.deviation_metric == align::DeviationMetric::MSE ? "MSE" : "MAE"},
        {"joint_names", ref_seq.joint_set->joint_names},
        {"triples", triples_json},
        {"path", pairs},
        {"total_cost", path.total_cost},
        {"worst",
         {{"pair_index", worst.pair_index},
          {"ref_index", worst.ref_index},
          {"query_index", worst.query_index},
          {"deviation", worst.deviation},
          {"per_angle", worst.per_angle},
          {"regions", regions},
          {"ref_frame", frame_json(ref_seq.frames[static_cast<size_t>(worst.ref_index)])},
          {"query_frame", frame_json(query_seq.frames[static_cast<size_t>(worst.query_index)])}}}};
    write_json(out_path, doc);

    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "pair_index,ref_index,query_index,deviation\n";
        for (size_t k = 0; k < devs.size(); ++k)
            csv << k << "," << path.pairs[k].first << "," << path.pairs[k].second << ","
                << devs[k] << "\n";
        write_text(csv_path, csv.str());
    }
}

namespace {

json config_json(const feedback::PromptConfig& config) {
    return {{"input_mode", feedback::to_string(config.input_mode)},
            {"use_error_list", config.use_error_list},
            {"use_body_regions", config.use_body_regions}};
}

feedback::PromptConfig config_from_json(const json& doc, const std::string& cot_trigger) {
    feedback::PromptConfig config;
    const std::string mode = doc["input_mode"].get<std::string>();
    if (mode == "image") config.input_mode = feedback::InputMode::image;
    else if (mode == "skeleton") config.input_mode = feedback::InputMode::skeleton;
    else if (mode == "image+skeleton") config.input_mode = feedback::InputMode::image_skeleton;
    else raise(Errc::malformed_record, "unknown input_mode: " + mode);
    config.use_error_list = doc["use_error_list"].get<bool>();
    config.use_body_regions = doc["use_body_regions"].get<bool>();
    config.cot_trigger = cot_trigger;
    return config;
}

}  // namespace

void run_prompt(const PipelineConfig& config, const std::string& spec_path,
                const std::string& align_report_path, const std::string& out_path) {
    const feedback::ExerciseSpec spec = feedback::load_exercise_spec(spec_path);
    for (const std::string& warning : feedback::validate_exercise_spec(spec))
        std::cerr << "warning: " << warning << "\n";

    std::ifstream in(align_report_path);
    if (!in) raise(Errc::file_not_found, "cannot open align report: " + align_report_path);
    json report = json::parse(in, nullptr, false);
    if (report.is_discarded() || !report.contains("worst"))
        raise(Errc::malformed_record, align_report_path + ": expected an alignment report");

    const motion::SkeletonFrame ref_frame = frame_from_json(report["worst"]["ref_frame"]);
    const motion::SkeletonFrame query_frame = frame_from_json(report["worst"]["query_frame"]);
    const std::vector<std::string> joint_names =
        report["joint_names"].get<std::vector<std::string>>();

    std::string ref_label = report.value("ref_label", std::string{});
    std::string query_label = report.value("query_label", std::string{});
    if (ref_label.empty()) ref_label = "reference";
    if (query_label.empty()) query_label = "query";
    const std::vector<feedback::ImageRef> image_refs = {
        {ref_label, report["worst"]["ref_index"].get<int>()},
        {query_label, report["worst"]["query_index"].get<int>()}};

    json bundles = json::array();
    for (const feedback::PromptConfig& cell : feedback::ablation_grid(config.cot_trigger)) {
        const bool skeleton = cell.input_mode != feedback::InputMode::image;
        const bool image = cell.input_mode != feedback::InputMode::skeleton;
        const feedback::PromptBundle bundle = feedback::build_prompt(
            spec, cell, skeleton ? std::optional(ref_frame) : std::nullopt,
            skeleton ? std::optional(query_frame) : std::nullopt,
            image ? image_refs : std::vector<feedback::ImageRef>{}, joint_names);

        json segments = json::array();
        for (const feedback::Segment& s : bundle.segments)
            segments.push_back({{"role", s.role}, {"text", s.text}});
        json refs = json::array();
        for (const feedback::ImageRef& r : bundle.image_refs)
            refs.push_back({{"source", r.source}, {"frame_index", r.frame_index}});
        bundles.push_back({{"config", config_json(cell)},
                           {"hash", bundle.content_hash()},
                           {"image_refs", refs},
                           {"segments", segments}});
    }

    write_json(out_path, json{{"exercise_id", spec.id},
                              {"cot_trigger", config.cot_trigger},
                              {"bundles", bundles}});
}

namespace {

struct EvalItem {
    feedback::PromptConfig config;
    std::string response;
    std::string hash;  // bundle hash when known
};

std::vector<EvalItem> collect_responses(const PipelineConfig& config, const json& input) {
    std::vector<EvalItem> items;
    if (input.contains("bundles")) {
        const std::string cot = input.value("cot_trigger", config.cot_trigger);
        for (const json& b : input["bundles"]) {
            feedback::PromptBundle bundle;
            bundle.config = config_from_json(b["config"], cot);
            for (const json& s : b["segments"])
                bundle.segments.push_back(
                    {s["role"].get<std::string>(), s["text"].get<std::string>()});
            for (const json& r : b["image_refs"])
                bundle.image_refs.push_back(
                    {r["source"].get<std::string>(), r["frame_index"].get<int>()});
            EvalItem item;
            item.config = bundle.config;
            item.hash = bundle.content_hash();
            item.response = feedback::chat(config.chat_endpoint, bundle);
            items.push_back(std::move(item));
        }
    } else if (input.contains("responses")) {
        for (const json& r : input["responses"]) {
            EvalItem item;
            item.config = config_from_json(r["config"], config.cot_trigger);
            item.response = r["response"].get<std::string>();
            item.hash = r.value("hash", std::string{});
            items.push_back(std::move(item));
        }
    } else {
        raise(Errc::malformed_record, "evaluate input needs 'bundles' or 'responses'");
    }
    return items;
}

std::string hint_key(const feedback::PromptConfig& config) {
    if (config.use_error_list && config.use_body_regions) return "error_list+body_regions";
    if (config.use_error_list) return "error_list";
    if (config.use_body_regions) return "body_regions";
    return "none";
}

}  // namespace

void run_evaluate(const PipelineConfig& config, const std::string& input_path,
                  const std::string& ground_truth_path, const std::string& embeddings_dir,
                  const std::string& out_path) {
    std::ifstream in(input_path);
    if (!in) raise(Errc::file_not_found, "cannot open evaluate input: " + input_path);
    json input = json::parse(in, nullptr, false);
    if (input.is_discarded())
        raise(Errc::malformed_record, input_path + ": not valid JSON");

    std::ifstream gt_in(ground_truth_path);
    if (!gt_in) raise(Errc::file_not_found, "cannot open ground truth: " + ground_truth_path);
    json gt = json::parse(gt_in, nullptr, false);
    if (gt.is_discarded() || !gt.contains("text"))
        raise(Errc::malformed_record, ground_truth_path + ": expected {text: ...}");
    const std::string truth = gt["text"].get<std::string>();

    const std::vector<EvalItem> items = collect_responses(config, input);
    if (items.empty()) raise(Errc::empty_input, input_path + ": nothing to evaluate");

    std::vector<feedback::JudgeVerdict> verdicts;
    json verdicts_json = json::array();
    std::map<std::string, std::map<std::string, std::pair<int, int>>> grid;  // mode -> hints -> (matches, total)
    for (const EvalItem& item : items) {
        const feedback::JudgeVerdict v =
            feedback::judge_semantic_match(config.judge_endpoint, item.response, truth);
        verdicts.push_back(v);
        auto& cell = grid[feedback::to_string(item.config.input_mode)][hint_key(item.config)];
        cell.first += v.match ? 1 : 0;
        cell.second += 1;
        verdicts_json.push_back({{"hash", item.hash},
                                 {"input_mode", feedback::to_string(item.config.input_mode)},
                                 {"use_error_list", item.config.use_error_list},
                                 {"use_body_regions", item.config.use_body_regions},
                                 {"match", v.match},
                                 {"judge_raw", v.judge_raw}});
    }
    const feedback::Accuracy overall = feedback::accuracy(verdicts);

    json grid_json;
    for (const auto& [mode, cells] : grid) {
        json row;
        for (const auto& [hints, counts] : cells)
            row[hints] = {{"matches", counts.first},
                          {"total", counts.second},
                          {"percent", 100.0 * counts.first / counts.second}};
        grid_json[mode] = row;
    }

    json doc = {{"accuracy",
                 {{"overall",
                   {{"matches", overall.matches},
                    {"total", overall.total},
                    {"percent", overall.percent}}},
                  {"grid", grid_json}}},
                {"verdicts", verdicts_json}};

    if (!embeddings_dir.empty()) {
        const std::filesystem::path dir(embeddings_dir);
        const std::string truth_stem = (dir / "ground_truth").string();
        const feedback::EmbeddingMatrix truth_emb = feedback::load_embeddings(truth_stem);

        std::vector<std::string> stems;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            const std::filesystem::path& p = entry.path();
            if (p.extension() == ".f32" && p.stem() != "ground_truth")
                stems.push_back((dir / p.stem()).string());
        }
        std::sort(stems.begin(), stems.end());

        json methods;
        for (const std::string& stem : stems) {
            const feedback::EmbeddingMatrix emb = feedback::load_embeddings(stem);
            if (emb.dim != truth_emb.dim)
                raise(Errc::dim_mismatch, stem + ": dim differs from ground truth");
            const int pairs = std::min(emb.count, truth_emb.count);
            std::vector<std::pair<std::vector<double>, std::vector<double>>> pair_list;
            for (int i = 0; i < pairs; ++i)
                pair_list.emplace_back(emb.row(i), truth_emb.row(i));
            methods[std::filesystem::path(stem).stem().string()] = {
                {"mean", feedback::mean_similarity(pair_list)}, {"count", pairs}};
        }
        doc["similarity"] = {{"methods", methods}};
    }

    if (config.detection_total > 0) {
        const feedback::DetectionSummary s =
            feedback::detection_summary(config.detection_total, config.detection_undetected);
        doc["detection"] = {{"total", s.total},
                            {"undetected", s.undetected},
                            {"detected", s.detected},
                            {"rate_percent", s.rate_percent}};
    }

    write_json(out_path, doc);
}

}  // namespace airs::pipeline
