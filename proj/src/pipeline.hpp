#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace airs::pipeline {

// One function per CLI subcommand. Inputs and outputs are file paths; "-"
// writes the primary output to stdout. All functions throw airs::Error.

void run_project(const PipelineConfig& config, const std::string& cloud_path,
                 const std::string& out_path);

void run_footprint(const PipelineConfig& config, const std::vector<std::string>& sequence_paths,
                   const std::string& out_path);

void run_place(const PipelineConfig& config, const std::string& grid_path,
               const std::string& footprint_path, const std::string& out_path);

void run_navigate(const PipelineConfig& config, const std::string& grid_path,
                  const std::string& plan_path, const std::string& pose_stream_path,
                  const std::string& out_path, const std::string& text_path = {});

void run_align(const PipelineConfig& config, const std::string& ref_path,
               const std::string& query_path, const std::string& out_path,
               const std::string& csv_path = {});

void run_prompt(const PipelineConfig& config, const std::string& spec_path,
                const std::string& align_report_path, const std::string& out_path);

void run_evaluate(const PipelineConfig& config, const std::string& input_path,
                  const std::string& ground_truth_path, const std::string& embeddings_dir,
                  const std::string& out_path);

}  // namespace airs::pipeline
