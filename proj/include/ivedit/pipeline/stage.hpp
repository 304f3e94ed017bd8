// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Stage jobs: linear chains of adapter calls and native operations, one
// chain per category following the data-pipeline flowcharts. Execution is
// idempotent (rerunning a done job is a no-op, completed steps are skipped),
// and failures record the failing step index while keeping every artifact
// persisted so far.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ivedit/adapters/adapters.hpp"
#include "ivedit/core/types.hpp"
#include "ivedit/pipeline/store.hpp"

namespace ivedit::pipeline {

struct StepSpec {
  std::string name;
  enum class Kind { Native, Adapter } kind = Kind::Native;
  adapters::Capability capability = adapters::Capability::Caption;  // Adapter steps only
};

enum class JobStatus { Pending, Running, Done, Failed };

std::string_view job_status_name(JobStatus s);

struct StageJob {
  std::string id;
  core::Category category = core::Category::GlobalStyle;
  std::vector<StepSpec> steps;
  nlohmann::json inputs;  // seeds, geometry, upstream artifact refs
  JobStatus status = JobStatus::Pending;
  int failed_step = -1;
  std::map<std::string, std::string> artifacts;  // step name -> store ref
  std::string error;

  nlohmann::json to_json() const;
  static StageJob from_json(const nlohmann::json& j);
};

// Stage-1 pre-processing job for one synthetic clip.
StageJob make_stage1_job(core::Category category, int index, uint64_t seed, int clip_t,
                         int clip_h, int clip_w, int window_slack);

// Stage-2 pair-construction job; record_ref points at a stage-1 record.
StageJob make_stage2_job(core::Category category, int index, uint64_t seed,
                         const std::string& record_ref, int creative_variants);

// Stage-3 scoring job for one pair record.
StageJob make_stage3_job(const std::string& pair_id, core::Category category, uint64_t seed,
                         const std::string& pair_ref);

// Executes pending steps in order. Adapter failures (after retries) mark the
// job failed instead of throwing. Done jobs return unchanged.
StageJob run_stage(StageJob job, adapters::AdapterSet& adapters, ArtifactStore& store);

}  // namespace ivedit::pipeline
