#include "config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace airs {

namespace {

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out))
        raise(Errc::invalid_config, key + ": expected a number, got '" + value + "'");
    return out;
}

int to_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        raise(Errc::invalid_config, key + ": expected an integer, got '" + value + "'");
    return out;
}

double positive(const std::string& key, double v) {
    if (v <= 0.0) raise(Errc::invalid_config, key + " must be positive");
    return v;
}

std::string format_number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

feedback::Transport to_transport(const std::string& key, const std::string& value) {
    if (value == "replay") return feedback::Transport::replay;
    if (value == "http") return feedback::Transport::http;
    raise(Errc::invalid_config, key + ": expected 'replay' or 'http'");
}

void set_endpoint(feedback::EndpointConfig& ep, const std::string& key, const std::string& field,
                  const std::string& value) {
    if (field == "transport") ep.transport = to_transport(key, value);
    else if (field == "replay_dir") ep.replay_dir = value;
    else if (field == "base_url") ep.base_url = value;
    else if (field == "model") ep.model = value;
    else if (field == "api_key_env") ep.api_key_env = value;
    else if (field == "timeout_s") ep.timeout_s = positive(key, to_double(key, value));
    else if (field == "max_retries") ep.max_retries = to_int(key, value);
    else if (field == "retry_base_ms") ep.retry_base_ms = to_int(key, value);
    else raise(Errc::invalid_config, "unknown option: " + key);
}

std::string get_endpoint(const feedback::EndpointConfig& ep, const std::string& field) {
    if (field == "transport") return ep.transport == feedback::Transport::replay ? "replay" : "http";
    if (field == "replay_dir") return ep.replay_dir;
    if (field == "base_url") return ep.base_url;
    if (field == "model") return ep.model;
    if (field == "api_key_env") return ep.api_key_env;
    if (field == "timeout_s") return format_number(ep.timeout_s);
    if (field == "max_retries") return std::to_string(ep.max_retries);
    if (field == "retry_base_ms") return std::to_string(ep.retry_base_ms);
    raise(Errc::invalid_config, "unknown endpoint field: " + field);
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
    if (key == "grid.resolution") grid_resolution = positive(key, to_double(key, value));
    else if (key == "grid.z_min") z_min = to_double(key, value);
    else if (key == "grid.z_max") z_max = to_double(key, value);
    else if (key == "grid.min_hits") {
        min_hits = to_int(key, value);
        if (min_hits < 1) raise(Errc::invalid_config, "grid.min_hits must be at least 1");
    } else if (key == "footprint.margin") {
        margin = to_double(key, value);
        if (margin < 0.0) raise(Errc::invalid_config, "footprint.margin must be non-negative");
    } else if (key == "footprint.tripod_radius") tripod_radius = positive(key, to_double(key, value));
    else if (key == "footprint.mvee_tol") mvee_tol = positive(key, to_double(key, value));
    else if (key == "footprint.mvee_max_iters") {
        mvee_max_iters = to_int(key, value);
        if (mvee_max_iters < 1) raise(Errc::invalid_config, "footprint.mvee_max_iters must be >= 1");
    } else if (key == "camera.hfov_deg") {
        hfov_deg = to_double(key, value);
        if (hfov_deg <= 0.0 || hfov_deg >= 180.0)
            raise(Errc::invalid_config, "camera.hfov_deg must be in (0, 180)");
    } else if (key == "camera.vfov_deg") {
        vfov_deg = to_double(key, value);
        if (vfov_deg <= 0.0 || vfov_deg >= 180.0)
            raise(Errc::invalid_config, "camera.vfov_deg must be in (0, 180)");
    } else if (key == "camera.mount_height") mount_height = positive(key, to_double(key, value));
    else if (key == "placement.rotations") {
        rotations = to_int(key, value);
        if (rotations < 1) raise(Errc::invalid_config, "placement.rotations must be >= 1");
    } else if (key == "placement.score_cap") {
        score_cap = to_int(key, value);
        if (score_cap < 1) raise(Errc::invalid_config, "placement.score_cap must be >= 1");
    } else if (key == "placement.max_alternatives") {
        max_alternatives = to_int(key, value);
        if (max_alternatives < 0)
            raise(Errc::invalid_config, "placement.max_alternatives must be >= 0");
    } else if (key == "placement.user_x") {
        if (value.empty()) user_x.reset();
        else user_x = to_double(key, value);
    } else if (key == "placement.user_y") {
        if (value.empty()) user_y.reset();
        else user_y = to_double(key, value);
    } else if (key == "placement.debug_overlay") debug_overlay = value;
    else if (key == "nav.inflation_radius") {
        inflation_radius = to_double(key, value);
        if (inflation_radius < 0.0)
            raise(Errc::invalid_config, "nav.inflation_radius must be non-negative");
    } else if (key == "nav.labels_path") labels_path = value;
    else if (key == "align.frame_metric") {
        if (value == "L2") frame_metric = align::FrameMetric::L2;
        else if (value == "L1") frame_metric = align::FrameMetric::L1;
        else raise(Errc::invalid_config, "align.frame_metric must be L2 or L1");
    } else if (key == "align.deviation_metric") {
        if (value == "MSE") deviation_metric = align::DeviationMetric::MSE;
        else if (value == "MAE") deviation_metric = align::DeviationMetric::MAE;
        else raise(Errc::invalid_config, "align.deviation_metric must be MSE or MAE");
    } else if (key == "align.band") {
        band = to_int(key, value);
        if (band < 0) raise(Errc::invalid_config, "align.band must be non-negative");
    } else if (key == "align.triples") triples_spec = value;
    else if (key == "feedback.cot_trigger") cot_trigger = value;
    else if (key == "evaluate.detection_total") {
        detection_total = to_int(key, value);
        if (detection_total < 0) raise(Errc::invalid_config, "detection_total must be >= 0");
    } else if (key == "evaluate.detection_undetected") {
        detection_undetected = to_int(key, value);
        if (detection_undetected < 0)
            raise(Errc::invalid_config, "detection_undetected must be >= 0");
    } else if (key.rfind("feedback.", 0) == 0) {
        set_endpoint(chat_endpoint, key, key.substr(9), value);
    } else if (key.rfind("judge.", 0) == 0) {
        set_endpoint(judge_endpoint, key, key.substr(6), value);
    } else {
        raise(Errc::invalid_config, "unknown option: " + key);
    }

    if (z_min >= z_max) raise(Errc::invalid_config, "grid z band must satisfy z_min < z_max");
}

std::string PipelineConfig::get(const std::string& key) const {
    if (key == "grid.resolution") return format_number(grid_resolution);
    if (key == "grid.z_min") return format_number(z_min);
    if (key == "grid.z_max") return format_number(z_max);
    if (key == "grid.min_hits") return std::to_string(min_hits);
    if (key == "footprint.margin") return format_number(margin);
    if (key == "footprint.tripod_radius") return format_number(tripod_radius);
    if (key == "footprint.mvee_tol") return format_number(mvee_tol);
    if (key == "footprint.mvee_max_iters") return std::to_string(mvee_max_iters);
    if (key == "camera.hfov_deg") return format_number(hfov_deg);
    if (key == "camera.vfov_deg") return format_number(vfov_deg);
    if (key == "camera.mount_height") return format_number(mount_height);
    if (key == "placement.rotations") return std::to_string(rotations);
    if (key == "placement.score_cap") return std::to_string(score_cap);
    if (key == "placement.max_alternatives") return std::to_string(max_alternatives);
    if (key == "placement.user_x") return user_x ? format_number(*user_x) : "";
    if (key == "placement.user_y") return user_y ? format_number(*user_y) : "";
    if (key == "placement.debug_overlay") return debug_overlay;
    if (key == "nav.inflation_radius") return format_number(inflation_radius);
    if (key == "nav.labels_path") return labels_path;
    if (key == "align.frame_metric") return frame_metric == align::FrameMetric::L2 ? "L2" : "L1";
    if (key == "align.deviation_metric")
        return deviation_metric == align::DeviationMetric::MSE ? "MSE" : "MAE";
    if (key == "align.band") return std::to_string(band);
    if (key == "align.triples") return triples_spec;
    if (key == "feedback.cot_trigger") return cot_trigger;
    if (key == "evaluate.detection_total") return std::to_string(detection_total);
    if (key == "evaluate.detection_undetected") return std::to_string(detection_undetected);
    if (key.rfind("feedback.", 0) == 0) return get_endpoint(chat_endpoint, key.substr(9));
    if (key.rfind("judge.", 0) == 0) return get_endpoint(judge_endpoint, key.substr(6));
    raise(Errc::invalid_config, "unknown option: " + key);
}

const std::vector<std::string>& PipelineConfig::keys() {
    static const std::vector<std::string> all = {
        "grid.resolution", "grid.z_min", "grid.z_max", "grid.min_hits",
        "footprint.margin", "footprint.tripod_radius", "footprint.mvee_tol",
        "footprint.mvee_max_iters",
        "camera.hfov_deg", "camera.vfov_deg", "camera.mount_height",
        "placement.rotations", "placement.score_cap", "placement.max_alternatives",
        "placement.user_x", "placement.user_y", "placement.debug_overlay",
        "nav.inflation_radius", "nav.labels_path",
        "align.frame_metric", "align.deviation_metric", "align.band", "align.triples",
        "feedback.cot_trigger",
        "feedback.transport", "feedback.replay_dir", "feedback.base_url", "feedback.model",
        "feedback.api_key_env", "feedback.timeout_s", "feedback.max_retries",
        "feedback.retry_base_ms",
        "judge.transport", "judge.replay_dir", "judge.base_url", "judge.model",
        "judge.api_key_env", "judge.timeout_s", "judge.max_retries", "judge.retry_base_ms",
        "evaluate.detection_total", "evaluate.detection_undetected",
    };
    return all;
}

std::vector<align::AngleTriple> PipelineConfig::triples() const {
    if (triples_spec.empty()) return align::default_triples();
    std::vector<align::AngleTriple> out;
    std::istringstream stream(triples_spec);
    std::string item;
    while (std::getline(stream, item, ';')) {
        if (item.empty()) continue;
        std::istringstream parts(item);
        std::string a, pivot, c;
        if (!std::getline(parts, a, ',') || !std::getline(parts, pivot, ',') ||
            !std::getline(parts, c, ','))
            raise(Errc::invalid_config, "align.triples entries must be 'a,pivot,c': " + item);
        out.push_back({a, pivot, c});
    }
    if (out.empty()) raise(Errc::invalid_config, "align.triples parsed to an empty list");
    return out;
}

footprint::CameraSpec PipelineConfig::camera() const {
    return {hfov_deg * M_PI / 180.0, vfov_deg * M_PI / 180.0, mount_height};
}

}  // namespace airs
