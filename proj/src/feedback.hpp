#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "motion.hpp"

namespace airs::feedback {

struct ErrorEntry {
    std::string code;
    std::string description;
};

struct BodyRegion {
    std::string label;
    std::vector<std::string> joints;
};

struct ExerciseSpec {
    std::string id;
    std::string description;
    std::vector<ErrorEntry> error_list;
    std::vector<BodyRegion> body_regions;
};

ExerciseSpec load_exercise_spec(const std::string& path);
// Soft checks (e.g. unusual error-list size) reported as warnings, not errors.
std::vector<std::string> validate_exercise_spec(const ExerciseSpec& spec);

enum class InputMode { image, skeleton, image_skeleton };

std::string to_string(InputMode mode);

struct PromptConfig {
    InputMode input_mode = InputMode::image;
    bool use_error_list = false;
    bool use_body_regions = false;
    std::string cot_trigger = "Let's think step by step.";
};

struct ImageRef {
    std::string source;  // e.g. "clinic" / "home"
    int frame_index = 0;

    std::string str() const { return source + "#" + std::to_string(frame_index); }
};

struct Segment {
    std::string role;  // "system" / "user"
    std::string text;
};

struct PromptBundle {
    std::vector<Segment> segments;
    std::vector<ImageRef> image_refs;
    PromptConfig config;

    // Canonical serialization; equal inputs yield byte-equal strings.
    std::string canonical_json() const;
    std::string content_hash() const;  // sha256 of canonical_json()
};

// Segments in fixed order: system preamble, exercise description, error list
// (optional), body regions (optional), reference + query skeletons (skeleton
// modes, 3 decimals), CoT trigger, output-format instruction. joint_names
// must be given with the frames.
PromptBundle build_prompt(const ExerciseSpec& spec, const PromptConfig& config,
                          const std::optional<motion::SkeletonFrame>& ref_frame,
                          const std::optional<motion::SkeletonFrame>& query_frame,
                          const std::vector<ImageRef>& image_refs,
                          const std::vector<std::string>& joint_names = {});

// The 12-cell ablation grid in a fixed order: input modes (image, skeleton,
// image+skeleton) x hint blocks (none, EL, BL, EL+BL).
std::vector<PromptConfig> ablation_grid(const std::string& cot_trigger);

enum class Transport { replay, http };

struct EndpointConfig {
    Transport transport = Transport::replay;
    std::string replay_dir;
    std::string base_url;  // scheme://host[:port]; /v1/chat/completions is appended
    std::string model = "gpt-4-vision";
    std::string api_key_env = "AIRS_API_KEY";
    double timeout_s = 30.0;
    int max_retries = 5;
    int retry_base_ms = 250;
};

// Returns the model text. Replay mode reads <replay_dir>/<hash>.txt; a miss
// raises Errc::replay_miss naming the hash. HTTP 429 responses are retried
// with exponential backoff up to max_retries, then raise Errc::rate_limited.
std::string chat(const EndpointConfig& endpoint, const PromptBundle& bundle);

struct JudgeVerdict {
    std::string generated;
    std::string ground_truth;
    bool match = false;
    std::string judge_raw;
};

// The fixed judging prompt for a generated/ground-truth pair; exposed so
// replay caches can be seeded with its content hash.
PromptBundle judge_bundle(const std::string& generated, const std::string& ground_truth);

// match = first alphabetic token of the response, case-folded, equals "yes".
// Anything other than yes/no raises Errc::unparseable_verdict.
JudgeVerdict judge_semantic_match(const EndpointConfig& endpoint, const std::string& generated,
                                  const std::string& ground_truth);

struct Accuracy {
    int matches = 0;
    int total = 0;
    double percent = 0.0;
};

Accuracy accuracy(const std::vector<JudgeVerdict>& verdicts);

double cosine_similarity(std::span<const double> a, std::span<const double> b);
double mean_similarity(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs);

struct DetectionSummary {
    int total = 0;
    int undetected = 0;
    int detected = 0;
    double rate_percent = 0.0;
};

DetectionSummary detection_summary(int total, int undetected);

// count x dim row-major float32 matrix stored as <stem>.f32 with a JSON
// sidecar <stem>.json carrying {dim, count}. Little-endian on disk.
struct EmbeddingMatrix {
    int dim = 0;
    int count = 0;
    std::vector<float> values;

    std::vector<double> row(int index) const;
};

EmbeddingMatrix load_embeddings(const std::string& stem);
void save_embeddings(const EmbeddingMatrix& matrix, const std::string& stem);

}  // namespace airs::feedback
