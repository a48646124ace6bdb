// AIRS pipeline CLI. Parses flags and an optional TOML config (flags win),
// pushes the resolved options through the C API, and dispatches one
// subcommand per pipeline stage. All data goes to files ("-" = stdout);
// diagnostics go to stderr.

#include <algorithm>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airs/airs.h"

namespace {

std::string flag_name(const std::string& key) {
    std::string name = "--" + key;
    std::replace(name.begin(), name.end(), '.', '-');
    std::replace(name.begin(), name.end(), '_', '-');
    return name;
}

int exit_code(airs_status status) {
    switch (status) {
    case AIRS_OK: return 0;
    case AIRS_ERR_USAGE: return 2;
    case AIRS_ERR_VALIDATION: return 3;
    case AIRS_ERR_NO_SOLUTION: return 4;
    case AIRS_ERR_TRANSPORT: return 5;
    case AIRS_ERR_INTERNAL: break;
    }
    return 1;
}

struct CtxDeleter {
    void operator()(airs_ctx* ctx) const { airs_ctx_free(ctx); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AIRS home-rehabilitation pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", airs_version());
    app.set_config("--config", "", "TOML config file; command-line flags win");

    // One flag per pipeline option, defaults taken from the library.
    std::unique_ptr<airs_ctx, CtxDeleter> defaults(airs_ctx_new());
    std::vector<std::string> keys;
    std::vector<std::string> values;
    for (const char* const* k = airs_option_keys(); *k; ++k) {
        keys.emplace_back(*k);
        const char* v = airs_get_option(defaults.get(), *k);
        values.emplace_back(v ? v : "");
    }
    for (size_t i = 0; i < keys.size(); ++i) {
        app.add_option(flag_name(keys[i]), values[i], "pipeline option " + keys[i])
            ->capture_default_str();
    }

    std::string cloud, grid, footprint_path, plan, poses, ref, query, spec, report, input,
        ground_truth, embeddings, out, text_out, csv_out;
    std::vector<std::string> sequences;

    CLI::App* project = app.add_subcommand("project", "point cloud -> occupancy grid");
    project->fallthrough();
    project->add_option("cloud", cloud, "ASCII PLY or XYZ CSV point cloud")->required();
    project->add_option("-o,--output", out, "grid output (.pgm or .json)")->required();

    CLI::App* footprint = app.add_subcommand("footprint", "sequences -> exercise footprint");
    footprint->fallthrough();
    footprint->add_option("sequences", sequences, "skeleton sequence files (JSONL)")
        ->required()
        ->expected(-1);
    footprint->add_option("-o,--output", out, "footprint JSON output")->required();

    CLI::App* place = app.add_subcommand("place", "grid + footprint -> placement plan");
    place->fallthrough();
    place->add_option("grid", grid, "occupancy grid (.pgm or .json)")->required();
    place->add_option("footprint", footprint_path, "footprint JSON")->required();
    place->add_option("-o,--output", out, "plan JSON output")->required();

    CLI::App* navigate = app.add_subcommand("navigate", "grid + plan + poses -> instructions");
    navigate->fallthrough();
    navigate->add_option("grid", grid, "occupancy grid (.pgm or .json)")->required();
    navigate->add_option("plan", plan, "placement plan JSON")->required();
    navigate->add_option("poses", poses, "pose stream JSONL ({t,x,y,heading})")->required();
    navigate->add_option("-o,--output", out, "instruction JSON output")->required();
    navigate->add_option("--text", text_out, "plain instruction lines (for TTS piping)");

    CLI::App* align = app.add_subcommand("align", "reference + query -> DTW report");
    align->fallthrough();
    align->add_option("reference", ref, "clinic sequence (JSONL)")->required();
    align->add_option("query", query, "home sequence (JSONL)")->required();
    align->add_option("-o,--output", out, "alignment report JSON output")->required();
    align->add_option("--csv", csv_out, "per-pair deviations CSV");

    CLI::App* prompt = app.add_subcommand("prompt", "spec + alignment -> ablation bundles");
    prompt->fallthrough();
    prompt->add_option("spec", spec, "exercise spec JSON")->required();
    prompt->add_option("report", report, "alignment report JSON")->required();
    prompt->add_option("-o,--output", out, "bundle manifest output")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "bundles/responses -> metric report");
    evaluate->fallthrough();
    evaluate->add_option("input", input, "bundle manifest or responses JSON")->required();
    evaluate->add_option("ground_truth", ground_truth, "ground-truth correction JSON")->required();
    evaluate->add_option("--embeddings", embeddings, "embedding directory (<method>.f32 + .json)");
    evaluate->add_option("-o,--output", out, "report JSON output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::unique_ptr<airs_ctx, CtxDeleter> ctx(airs_ctx_new());
    if (!ctx) {
        std::cerr << "error: cannot allocate context\n";
        return 1;
    }
    for (size_t i = 0; i < keys.size(); ++i) {
        if (airs_set_option(ctx.get(), keys[i].c_str(), values[i].c_str()) != AIRS_OK) {
            std::cerr << "error: " << airs_last_error(ctx.get()) << "\n";
            return 3;
        }
    }

    airs_status status = AIRS_OK;
    if (project->parsed()) {
        status = airs_project(ctx.get(), cloud.c_str(), out.c_str());
    } else if (footprint->parsed()) {
        std::vector<const char*> paths;
        for (const std::string& s : sequences) paths.push_back(s.c_str());
        status = airs_footprint(ctx.get(), paths.data(), paths.size(), out.c_str());
    } else if (place->parsed()) {
        status = airs_place(ctx.get(), grid.c_str(), footprint_path.c_str(), out.c_str());
    } else if (navigate->parsed()) {
        status = airs_navigate(ctx.get(), grid.c_str(), plan.c_str(), poses.c_str(), out.c_str(),
                               text_out.empty() ? nullptr : text_out.c_str());
    } else if (align->parsed()) {
        status = airs_align(ctx.get(), ref.c_str(), query.c_str(), out.c_str(),
                            csv_out.empty() ? nullptr : csv_out.c_str());
    } else if (prompt->parsed()) {
        status = airs_prompt(ctx.get(), spec.c_str(), report.c_str(), out.c_str());
    } else if (evaluate->parsed()) {
        status = airs_evaluate(ctx.get(), input.c_str(), ground_truth.c_str(),
                               embeddings.empty() ? nullptr : embeddings.c_str(), out.c_str());
    }

    if (status != AIRS_OK) std::cerr << "error: " << airs_last_error(ctx.get()) << "\n";
    return exit_code(status);
}
