/* AIRS home-rehabilitation pipeline, C API.
 *
 * All functions operate on an opaque context that carries the pipeline
 * configuration and the last error message. Inputs and outputs are file
 * paths; "-" writes the primary output of a step to stdout. Functions
 * return AIRS_OK on success; on failure airs_last_error() describes what
 * went wrong.
 */
#ifndef AIRS_H
#define AIRS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef AIRS_API
#if defined(_WIN32)
#define AIRS_API __declspec(dllexport)
#else
#define AIRS_API __attribute__((visibility("default")))
#endif
#endif

typedef enum airs_status {
    AIRS_OK = 0,
    AIRS_ERR_INTERNAL = 1,    /* unexpected failure */
    AIRS_ERR_USAGE = 2,       /* bad arguments to an API call */
    AIRS_ERR_VALIDATION = 3,  /* unreadable/malformed/invariant-violating input */
    AIRS_ERR_NO_SOLUTION = 4, /* no placement / no path */
    AIRS_ERR_TRANSPORT = 5    /* chat endpoint or replay-cache failure */
} airs_status;

typedef struct airs_ctx airs_ctx;

AIRS_API const char* airs_version(void);

AIRS_API airs_ctx* airs_ctx_new(void);
AIRS_API void airs_ctx_free(airs_ctx* ctx);

/* Dotted configuration keys, e.g. "grid.resolution", "nav.inflation_radius",
 * "feedback.replay_dir". Unknown keys and out-of-range values fail. */
AIRS_API airs_status airs_set_option(airs_ctx* ctx, const char* key, const char* value);
/* Current value as a string, or NULL for unknown keys (value stays valid
 * until the next airs_* call on this context). */
AIRS_API const char* airs_get_option(airs_ctx* ctx, const char* key);
/* NULL-terminated array of all known option keys. */
AIRS_API const char* const* airs_option_keys(void);

/* Empty string when the previous call succeeded. */
AIRS_API const char* airs_last_error(const airs_ctx* ctx);

/* Point cloud (ASCII PLY or XYZ CSV) -> occupancy grid (.pgm + sidecar or .json). */
AIRS_API airs_status airs_project(airs_ctx* ctx, const char* cloud_path, const char* out_path);

/* Skeleton sequences (JSONL) -> exercise footprint JSON. */
AIRS_API airs_status airs_footprint(airs_ctx* ctx, const char* const* sequence_paths,
                                    size_t sequence_count, const char* out_path);

/* Grid + footprint -> placement plan JSON (patient and camera poses). */
AIRS_API airs_status airs_place(airs_ctx* ctx, const char* grid_path,
                                const char* footprint_path, const char* out_path);

/* Grid + plan + pose stream (JSONL) -> per-pose instruction replans.
 * text_path may be NULL; when given, plain instruction lines are written
 * there for text-to-speech piping. */
AIRS_API airs_status airs_navigate(airs_ctx* ctx, const char* grid_path, const char* plan_path,
                                   const char* pose_stream_path, const char* out_path,
                                   const char* text_path);

/* Reference + query sequences -> DTW alignment report JSON. csv_path may be
 * NULL; when given, per-pair deviations are written as CSV. */
AIRS_API airs_status airs_align(airs_ctx* ctx, const char* ref_path, const char* query_path,
                                const char* out_path, const char* csv_path);

/* Exercise spec + alignment report -> the 12-bundle ablation manifest. */
AIRS_API airs_status airs_prompt(airs_ctx* ctx, const char* spec_path,
                                 const char* align_report_path, const char* out_path);

/* Bundle manifest (or pre-collected responses) + ground truth -> accuracy and
 * similarity report. embeddings_dir may be NULL. */
AIRS_API airs_status airs_evaluate(airs_ctx* ctx, const char* input_path,
                                   const char* ground_truth_path, const char* embeddings_dir,
                                   const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* AIRS_H */
