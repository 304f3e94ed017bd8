// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Full three-stage run: pre-processing jobs, per-category pair
// construction, judge scoring, and threshold retention. Jobs execute on a
// bounded worker pool; every output is deterministic for a fixed seed
// because job seeds derive from (root seed, category, index) and all
// artifacts are content-addressed.

#pragma once

#include <atomic>
#include <filesystem>
#include <vector>

#include "ivedit/adapters/adapters.hpp"
#include "ivedit/filtering/judge.hpp"
#include "ivedit/pipeline/stage.hpp"

namespace ivedit::pipeline {

struct PipelineConfig {
  std::vector<core::Category> categories;  // empty selects all eight
  int n_clips = 2;                         // clips per category
  uint64_t seed = 7;
  int workers = 2;
  int clip_t = 8, clip_h = 32, clip_w = 32;
  int window_slack = 8;  // library clips are clip_t + slack frames long
  double retention_threshold = 3.0;
  filtering::RetentionRule retention_rule = filtering::RetentionRule::MeanScore;
  int creative_variants = 3;
  std::atomic<bool>* interrupt = nullptr;  // optional cooperative stop
};

struct PipelineResult {
  std::vector<StageJob> jobs;
  int failed_jobs = 0;
  bool interrupted = false;
  int total_pairs = 0;
  int retained_pairs = 0;
  std::filesystem::path manifest_path;      // retained pairs (JSON Lines)
  std::filesystem::path all_pairs_path;     // every generated pair
  std::filesystem::path scored_path;        // scored manifest
  std::filesystem::path report_path;        // retention report (JSON)
  std::filesystem::path jobs_path;          // StageJob records (JSON Lines)
};

PipelineResult run_pipeline(const PipelineConfig& config, adapters::AdapterSet& adapters,
                            ArtifactStore& store);

// Executes jobs on `workers` threads; each job slot is owned by one worker.
void run_jobs(std::vector<StageJob>& jobs, adapters::AdapterSet& adapters,
              ArtifactStore& store, int workers, std::atomic<bool>* interrupt);

}  // namespace ivedit::pipeline
