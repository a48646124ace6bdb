#include "feedback.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "error.hpp"
#include "sha256.hpp"

namespace airs::feedback {

namespace {

using nlohmann::json;

constexpr const char* kSystemPreamble =
    "You are a physical therapy assistant. You compare a patient's home exercise "
    "recording against the clinical reference recording, identify execution errors, "
    "and explain how to correct them.";

constexpr const char* kOutputFormat =
    "Answer with a short correction instruction for the patient: one or two "
    "sentences, imperative voice, naming the body part to adjust.";

constexpr const char* kJudgePreamble =
    "You compare two physiotherapy correction instructions and decide whether they "
    "convey the same meaning.";

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string serialize_skeleton(const std::string& title, const motion::SkeletonFrame& frame,
                               const std::vector<std::string>& joint_names) {
    std::ostringstream out;
    out << title << " skeleton, world coordinates in meters (joint: x y z):\n";
    for (size_t i = 0; i < frame.joints.size(); ++i) {
        const geom::Vec3& p = frame.joints[i];
        out << joint_names[i] << ": " << format_coord(p.x) << " " << format_coord(p.y) << " "
            << format_coord(p.z) << "\n";
    }
    return out.str();
}

}  // namespace

ExerciseSpec load_exercise_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::file_not_found, "cannot open exercise spec: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("id"))
        raise(Errc::malformed_record, path + ": expected an exercise spec document");

    ExerciseSpec spec;
    spec.id = doc["id"].get<std::string>();
    spec.description = doc.value("description", std::string{});
    for (const json& e : doc.value("error_list", json::array()))
        spec.error_list.push_back({e["code"].get<std::string>(), e["description"].get<std::string>()});
    for (const json& r : doc.value("body_regions", json::array())) {
        BodyRegion region;
        region.label = r["label"].get<std::string>();
        for (const json& j : r["joints"]) region.joints.push_back(j.get<std::string>());
        spec.body_regions.push_back(std::move(region));
    }

    std::vector<std::string> codes;
    for (const ErrorEntry& e : spec.error_list) codes.push_back(e.code);
    std::sort(codes.begin(), codes.end());
    if (std::adjacent_find(codes.begin(), codes.end()) != codes.end())
        raise(Errc::malformed_record, path + ": duplicate error codes");
    return spec;
}

std::vector<std::string> validate_exercise_spec(const ExerciseSpec& spec) {
    std::vector<std::string> warnings;
    if (spec.error_list.size() < 3 || spec.error_list.size() > 10)
        warnings.push_back("exercise " + spec.id + " lists " +
                           std::to_string(spec.error_list.size()) +
                           " errors; 3-10 expected for typical exercises");
    if (spec.description.empty())
        warnings.push_back("exercise " + spec.id + " has an empty description");
    return warnings;
}

std::string to_string(InputMode mode) {
    switch (mode) {
    case InputMode::image: return "image";
    case InputMode::skeleton: return "skeleton";
    case InputMode::image_skeleton: return "image+skeleton";
    }
    return "?";
}

std::string PromptBundle::canonical_json() const {
    json segs = json::array();
    for (const Segment& s : segments) segs.push_back({s.role, s.text});
    json refs = json::array();
    for (const ImageRef& r : image_refs) refs.push_back(r.str());
    json doc = {{"config",
                 {{"input_mode", to_string(config.input_mode)},
                  {"use_error_list", config.use_error_list},
                  {"use_body_regions", config.use_body_regions}}},
                {"image_refs", refs},
                {"segments", segs}};
    return doc.dump();
}

std::string PromptBundle::content_hash() const { return sha256_hex(canonical_json()); }

PromptBundle build_prompt(const ExerciseSpec& spec, const PromptConfig& config,
                          const std::optional<motion::SkeletonFrame>& ref_frame,
                          const std::optional<motion::SkeletonFrame>& query_frame,
                          const std::vector<ImageRef>& image_refs,
                          const std::vector<std::string>& joint_names) {
    const bool wants_skeleton =
        config.input_mode == InputMode::skeleton || config.input_mode == InputMode::image_skeleton;
    const bool wants_image =
        config.input_mode == InputMode::image || config.input_mode == InputMode::image_skeleton;

    if (wants_skeleton && (!ref_frame || !query_frame))
        raise(Errc::missing_input, "skeleton mode needs a reference and a query frame");
    if (!wants_skeleton && (ref_frame || query_frame))
        raise(Errc::missing_input, "frames supplied but the mode does not use skeletons");
    if (wants_image && image_refs.empty())
        raise(Errc::missing_input, "image mode needs at least one image reference");
    if (!wants_image && !image_refs.empty())
        raise(Errc::missing_input, "image references supplied but the mode does not use images");
    if (image_refs.size() > 2)
        raise(Errc::missing_input, "at most two image references are supported");
    if (wants_skeleton && joint_names.size() != ref_frame->joints.size())
        raise(Errc::missing_input, "joint names must match the skeleton frames");

    PromptBundle bundle;
    bundle.config = config;
    bundle.image_refs = wants_image ? image_refs : std::vector<ImageRef>{};

    bundle.segments.push_back({"system", kSystemPreamble});
    bundle.segments.push_back({"user", "Exercise: " + spec.id + "\n" + spec.description});

    if (config.use_error_list) {
        std::ostringstream block;
        block << "Known error types for this exercise:\n";
        for (const ErrorEntry& e : spec.error_list)
            block << "- " << e.code << ": " << e.description << "\n";
        bundle.segments.push_back({"user", block.str()});
    }
    if (config.use_body_regions) {
        std::ostringstream block;
        block << "Body regions to inspect:\n";
        for (const BodyRegion& r : spec.body_regions) {
            block << "- " << r.label << ":";
            for (const std::string& j : r.joints) block << " " << j;
            block << "\n";
        }
        bundle.segments.push_back({"user", block.str()});
    }
    if (wants_skeleton) {
        bundle.segments.push_back(
            {"user", serialize_skeleton("Reference", *ref_frame, joint_names)});
        bundle.segments.push_back({"user", serialize_skeleton("Home", *query_frame, joint_names)});
    }
    bundle.segments.push_back({"user", config.cot_trigger});
    bundle.segments.push_back({"user", kOutputFormat});
    return bundle;
}

std::vector<PromptConfig> ablation_grid(const std::string& cot_trigger) {
    std::vector<PromptConfig> grid;
    for (InputMode mode : {InputMode::image, InputMode::skeleton, InputMode::image_skeleton}) {
        for (int hints = 0; hints < 4; ++hints) {
            PromptConfig config;
            config.input_mode = mode;
            config.use_error_list = (hints & 1) != 0;
            config.use_body_regions = (hints & 2) != 0;
            config.cot_trigger = cot_trigger;
            grid.push_back(std::move(config));
        }
    }
    return grid;
}

namespace {

std::string chat_replay(const EndpointConfig& endpoint, const PromptBundle& bundle) {
    const std::string hash = bundle.content_hash();
    const std::filesystem::path file =
        std::filesystem::path(endpoint.replay_dir) / (hash + ".txt");
    std::ifstream in(file, std::ios::binary);
    if (!in) raise(Errc::replay_miss, "no replay response for bundle hash " + hash);
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

std::string chat_http(const EndpointConfig& endpoint, const PromptBundle& bundle) {
    if (endpoint.base_url.empty())
        raise(Errc::invalid_config, "http transport needs a base URL");

    json messages = json::array();
    for (const Segment& s : bundle.segments)
        messages.push_back({{"role", s.role}, {"content", s.text}});
    if (!bundle.image_refs.empty()) {
        json content = json::array();
        for (const ImageRef& r : bundle.image_refs)
            content.push_back({{"type", "image_ref"}, {"ref", r.str()}});
        messages.push_back({{"role", "user"}, {"content", content}});
    }
    const std::string body = json{{"model", endpoint.model}, {"messages", messages}}.dump();

    httplib::Client client(endpoint.base_url);
    client.set_connection_timeout(std::chrono::duration<double>(endpoint.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(endpoint.timeout_s));
    httplib::Headers headers;
    if (const char* key = std::getenv(endpoint.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    for (int attempt = 0;; ++attempt) {
        auto res = client.Post("/v1/chat/completions", headers, body, "application/json");
        if (!res) raise(Errc::transport_error, "chat endpoint unreachable: " + endpoint.base_url);
        if (res->status == 429) {
            if (attempt >= endpoint.max_retries)
                raise(Errc::rate_limited, "rate limited after " +
                                              std::to_string(endpoint.max_retries) + " retries");
            std::this_thread::sleep_for(
                std::chrono::milliseconds(endpoint.retry_base_ms * (1LL << attempt)));
            continue;
        }
        if (res->status != 200)
            raise(Errc::transport_error,
                  "chat endpoint returned HTTP " + std::to_string(res->status));
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty())
            raise(Errc::transport_error, "malformed chat completion response");
        return reply["choices"][0]["message"]["content"].get<std::string>();
    }
}

}  // namespace

std::string chat(const EndpointConfig& endpoint, const PromptBundle& bundle) {
    if (endpoint.transport == Transport::replay) return chat_replay(endpoint, bundle);
    return chat_http(endpoint, bundle);
}

PromptBundle judge_bundle(const std::string& generated, const std::string& ground_truth) {
    if (generated.empty() || ground_truth.empty())
        raise(Errc::empty_input, "judge needs non-empty texts");
    PromptBundle bundle;
    bundle.config.input_mode = InputMode::skeleton;  // text-only; no image refs
    bundle.config.cot_trigger.clear();
    bundle.segments.push_back({"system", kJudgePreamble});
    bundle.segments.push_back(
        {"user", "Do these two correction instructions have the same meaning? Answer YES or NO "
                 "as the first word, then explain briefly.\n\nGround truth: " +
                     ground_truth + "\n\nGenerated: " + generated});
    return bundle;
}

JudgeVerdict judge_semantic_match(const EndpointConfig& endpoint, const std::string& generated,
                                  const std::string& ground_truth) {
    const PromptBundle bundle = judge_bundle(generated, ground_truth);
    const std::string raw = chat(endpoint, bundle);

    // First alphabetic token decides; anything else is unparseable.
    std::string token;
    for (const char ch : raw) {
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        } else if (!token.empty()) {
            break;
        }
    }
    if (token != "yes" && token != "no")
        raise(Errc::unparseable_verdict, "judge response has no leading yes/no: " + raw);

    return {generated, ground_truth, token == "yes", raw};
}

Accuracy accuracy(const std::vector<JudgeVerdict>& verdicts) {
    if (verdicts.empty()) raise(Errc::empty_input, "accuracy over an empty verdict list");
    Accuracy acc;
    acc.total = static_cast<int>(verdicts.size());
    for (const JudgeVerdict& v : verdicts) acc.matches += v.match ? 1 : 0;
    acc.percent = 100.0 * acc.matches / acc.total;
    return acc;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) raise(Errc::dim_mismatch, "embedding dimensions differ");
    if (a.empty()) raise(Errc::dim_mismatch, "empty embedding");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) raise(Errc::zero_vector, "zero-norm embedding");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double mean_similarity(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs) {
    if (pairs.empty()) raise(Errc::empty_input, "mean over an empty pair list");
    double sum = 0.0;
    for (const auto& [a, b] : pairs) sum += cosine_similarity(a, b);
    return sum / static_cast<double>(pairs.size());
}

DetectionSummary detection_summary(int total, int undetected) {
    if (total <= 0 || undetected < 0 || undetected > total)
        raise(Errc::invalid_counts, "need 0 <= undetected <= total with total > 0");
    DetectionSummary summary;
    summary.total = total;
    summary.undetected = undetected;
    summary.detected = total - undetected;
    summary.rate_percent = 100.0 * summary.detected / summary.total;
    return summary;
}

std::vector<double> EmbeddingMatrix::row(int index) const {
    const size_t base = static_cast<size_t>(index) * dim;
    return std::vector<double>(values.begin() + static_cast<long>(base),
                               values.begin() + static_cast<long>(base + dim));
}

EmbeddingMatrix load_embeddings(const std::string& stem) {
    std::ifstream side(stem + ".json");
    if (!side) raise(Errc::file_not_found, "missing embedding sidecar: " + stem + ".json");
    json meta = json::parse(side, nullptr, false);
    if (meta.is_discarded() || !meta.contains("dim") || !meta.contains("count"))
        raise(Errc::malformed_record, stem + ".json: expected {dim, count}");

    EmbeddingMatrix matrix;
    matrix.dim = meta["dim"].get<int>();
    matrix.count = meta["count"].get<int>();
    if (matrix.dim <= 0 || matrix.count <= 0)
        raise(Errc::malformed_record, stem + ".json: dim and count must be positive");

    std::ifstream in(stem + ".f32", std::ios::binary);
    if (!in) raise(Errc::file_not_found, "missing embedding data: " + stem + ".f32");
    const size_t n = static_cast<size_t>(matrix.dim) * matrix.count;
    std::vector<unsigned char> raw(n * 4);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        raise(Errc::malformed_record, stem + ".f32: shorter than dim*count floats");

    matrix.values.resize(n);
    for (size_t i = 0; i < n; ++i) {
        uint32_t bits = uint32_t(raw[4 * i]) | (uint32_t(raw[4 * i + 1]) << 8) |
                        (uint32_t(raw[4 * i + 2]) << 16) | (uint32_t(raw[4 * i + 3]) << 24);
        float f;
        std::memcpy(&f, &bits, sizeof f);
        matrix.values[i] = f;
    }
    return matrix;
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::string& stem) {
    std::ofstream out(stem + ".f32", std::ios::binary);
    if (!out) raise(Errc::io_failure, "cannot write embeddings: " + stem + ".f32");
    for (const float f : matrix.values) {
        uint32_t bits;
        std::memcpy(&bits, &f, sizeof bits);
        const unsigned char bytes[4] = {static_cast<unsigned char>(bits & 0xff),
                                        static_cast<unsigned char>((bits >> 8) & 0xff),
                                        static_cast<unsigned char>((bits >> 16) & 0xff),
                                        static_cast<unsigned char>((bits >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(bytes), 4);
    }
    std::ofstream side(stem + ".json", std::ios::binary);
    side << json{{"dim", matrix.dim}, {"count", matrix.count}}.dump(2) << "\n";
}

}  // namespace airs::feedback
