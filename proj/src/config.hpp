#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alignment.hpp"
#include "feedback.hpp"
#include "footprint.hpp"
#include "geometry.hpp"

namespace airs {

// Every knob of the pipeline, addressable by dotted string keys so the C API
// and the CLI share one surface (e.g. "grid.resolution", "nav.inflation_radius").
struct PipelineConfig {
    // grid.*
    double grid_resolution = 0.05;  // m/cell
    double z_min = 0.10;
    double z_max = 2.00;
    int min_hits = 3;

    // footprint.*
    double margin = 0.25;
    double tripod_radius = 0.35;
    double mvee_tol = 1e-6;
    int mvee_max_iters = 10000;

    // camera.*
    double hfov_deg = 70.0;
    double vfov_deg = 50.0;
    double mount_height = 1.2;

    // placement.*
    int rotations = 16;
    int score_cap = 10;
    int max_alternatives = 20;
    std::optional<double> user_x;
    std::optional<double> user_y;
    std::string debug_overlay;  // PGM path; empty = none

    // nav.*
    double inflation_radius = 0.30;
    std::string labels_path;  // semantic label map; empty = none

    // align.*
    align::FrameMetric frame_metric = align::FrameMetric::L2;
    align::DeviationMetric deviation_metric = align::DeviationMetric::MSE;
    int band = 0;                // 0 = full DP
    std::string triples_spec;    // "a,pivot,c;a,pivot,c;..."; empty = defaults

    // feedback.* / judge.*
    std::string cot_trigger = "Let's think step by step.";
    feedback::EndpointConfig chat_endpoint;
    feedback::EndpointConfig judge_endpoint;

    // evaluate.*
    int detection_total = 0;  // 0 = no detection summary in the report
    int detection_undetected = 0;

    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    static const std::vector<std::string>& keys();

    std::vector<align::AngleTriple> triples() const;
    footprint::CameraSpec camera() const;
};

}  // namespace airs
