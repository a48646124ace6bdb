#include "airs/airs.h"

#include <exception>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "pipeline.hpp"

struct airs_ctx {
    airs::PipelineConfig config;
    std::string last_error;
    std::string option_value;  // backing storage for airs_get_option
};

namespace {

airs_status to_status(airs::ErrorClass cls) {
    switch (cls) {
    case airs::ErrorClass::usage: return AIRS_ERR_USAGE;
    case airs::ErrorClass::io: return AIRS_ERR_VALIDATION;
    case airs::ErrorClass::validation: return AIRS_ERR_VALIDATION;
    case airs::ErrorClass::no_solution: return AIRS_ERR_NO_SOLUTION;
    case airs::ErrorClass::transport: return AIRS_ERR_TRANSPORT;
    }
    return AIRS_ERR_INTERNAL;
}

template <typename Fn>
airs_status guarded(airs_ctx* ctx, Fn&& fn) {
    if (!ctx) return AIRS_ERR_USAGE;
    ctx->last_error.clear();
    try {
        fn();
        return AIRS_OK;
    } catch (const airs::Error& e) {
        ctx->last_error = e.what();
        return to_status(e.error_class());
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return AIRS_ERR_INTERNAL;
    } catch (...) {
        ctx->last_error = "unknown error";
        return AIRS_ERR_INTERNAL;
    }
}

bool require(airs_ctx* ctx, const char* value, const char* name) {
    if (value) return true;
    if (ctx) ctx->last_error = std::string(name) + " must not be NULL";
    return false;
}

}  // namespace

extern "C" {

const char* airs_version(void) { return "0.1.0"; }

airs_ctx* airs_ctx_new(void) { return new (std::nothrow) airs_ctx(); }

void airs_ctx_free(airs_ctx* ctx) { delete ctx; }

airs_status airs_set_option(airs_ctx* ctx, const char* key, const char* value) {
    if (!ctx) return AIRS_ERR_USAGE;
    if (!require(ctx, key, "key") || !require(ctx, value, "value")) return AIRS_ERR_USAGE;
    return guarded(ctx, [&] { ctx->config.set(key, value); });
}

const char* airs_get_option(airs_ctx* ctx, const char* key) {
    if (!ctx || !key) return nullptr;
    try {
        ctx->option_value = ctx->config.get(key);
        return ctx->option_value.c_str();
    } catch (const std::exception&) {
        return nullptr;
    }
}

const char* const* airs_option_keys(void) {
    static const std::vector<const char*> keys = [] {
        std::vector<const char*> out;
        for (const std::string& key : airs::PipelineConfig::keys()) out.push_back(key.c_str());
        out.push_back(nullptr);
        return out;
    }();
    return keys.data();
}

const char* airs_last_error(const airs_ctx* ctx) {
    return ctx ? ctx->last_error.c_str() : "null context";
}

airs_status airs_project(airs_ctx* ctx, const char* cloud_path, const char* out_path) {
    if (!ctx) return AIRS_ERR_USAGE;
    if (!require(ctx, cloud_path, "cloud_path") || !require(ctx, out_path, "out_path"))
        return AIRS_ERR_USAGE;
    return guarded(ctx, [&] { airs::pipeline::run_project(ctx->config, cloud_path, out_path); });
}

airs_status airs_footprint(airs_ctx* ctx, const char* const* sequence_paths,
                           size_t sequence_count, const char* out_path) {
    if (!ctx) return AIRS_ERR_USAGE;
    if (!require(ctx, out_path, "out_path")) return AIRS_ERR_USAGE;
    if (!sequence_paths || sequence_count == 0) {
        ctx->last_error = "at least one sequence path is required";
        return AIRS_ERR_USAGE;
    }
    return guarded(ctx, [&] {
        std::vector<std::string> paths(sequence_paths, sequence_paths + sequence_count);
        airs::pipeline::run_footprint(ctx->config, paths, out_path);
    });
}

airs_status airs_place(airs_ctx* ctx, const char* grid_path, const char* footprint_path,
                       const char* out_path) {
    if (!ctx) return AIRS_ERR_USAGE;
    if (!require(ctx, grid_path, "grid_path") || !require(ctx, footprint_path, "footprint_path") ||
        !require(ctx, out_path, "out_path"))
        return AIRS_ERR_USAGE;
    return guarded(ctx, [&] {
        airs::pipeline::run_place(ctx->config, grid_path, footprint_path, out_path);
    });
}

airs_status airs_navigate(airs_ctx* ctx, const char* grid_path, const char* plan_path,
                          const char* pose_stream_path, const char* out_path,
                          const char* text_path) {
    if (!ctx) return AIRS_ERR_USAGE;
    if (!require(ctx, grid_path, "grid_path") || !require(ctx, plan_path, "plan_path") ||
        !require(ctx, pose_stream_path, "pose_stream_path") || !require(ctx, out_path, "out_path"))
        return AIRS_ERR_USAGE;
    return guarded(ctx, [&] {
        airs::pipeline::run_navigate(ctx->config, grid_path, plan_path, pose_stream_path,
                                     out_path, text_path ? text_path : "");
    });
}

airs_status airs_align(airs_ctx* ctx, const char* ref_path, const char* query_path,
                       const char* out_path, const char* csv_path) {
    if (!ctx) return AIRS_ERR_USAGE;
    if (!require(ctx, ref_path, "ref_path") || !require(ctx, query_path, "query_path") ||
        !require(ctx, out_path, "out_path"))
        return AIRS_ERR_USAGE;
    return guarded(ctx, [&] {
        airs::pipeline::run_align(ctx->config, ref_path, query_path, out_path,
                                  csv_path ? csv_path : "");
    });
}

airs_status airs_prompt(airs_ctx* ctx, const char* spec_path, const char* align_report_path,
                        const char* out_path) {
    if (!ctx) return AIRS_ERR_USAGE;
    if (!require(ctx, spec_path, "spec_path") ||
        !require(ctx, align_report_path, "align_report_path") ||
        !require(ctx, out_path, "out_path"))
        return AIRS_ERR_USAGE;
    return guarded(ctx, [&] {
        airs::pipeline::run_prompt(ctx->config, spec_path, align_report_path, out_path);
    });
}

airs_status airs_evaluate(airs_ctx* ctx, const char* input_path, const char* ground_truth_path,
                          const char* embeddings_dir, const char* out_path) {
    if (!ctx) return AIRS_ERR_USAGE;
    if (!require(ctx, input_path, "input_path") ||
        !require(ctx, ground_truth_path, "ground_truth_path") ||
        !require(ctx, out_path, "out_path"))
        return AIRS_ERR_USAGE;
    return guarded(ctx, [&] {
        airs::pipeline::run_evaluate(ctx->config, input_path, ground_truth_path,
                                     embeddings_dir ? embeddings_dir : "", out_path);
    });
}

}  // extern "C"
