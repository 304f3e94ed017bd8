// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/pipeline/orchestrator.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "ivedit/core/rng.hpp"

using nlohmann::json;

namespace ivedit::pipeline {

using core::Category;

void run_jobs(std::vector<StageJob>& jobs, adapters::AdapterSet& adapters,
              ArtifactStore& store, int workers, std::atomic<bool>* interrupt) {
  if (workers < 1) workers = 1;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      if (interrupt && interrupt->load()) return;
      size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      jobs[i] = run_stage(std::move(jobs[i]), adapters, store);
    }
  };
  std::vector<std::thread> threads;
  int n = std::min<int>(workers, static_cast<int>(jobs.size()));
  threads.reserve(static_cast<size_t>(std::max(n - 1, 0)));
  for (int t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
}

namespace {

uint64_t job_seed(uint64_t root, std::string_view stage, Category cat, int index) {
  return core::mix64(core::mix64(root, core::fnv1a64(stage)),
                     core::mix64(core::fnv1a64(core::category_name(cat)),
                                 static_cast<uint64_t>(index)));
}

core::ManifestPair manifest_pair_from_record(const json& rec) {
  core::ManifestPair p;
  p.id = rec.at("id").get<std::string>();
  p.category = *core::parse_category(rec.at("category").get<std::string>());
  p.instruction = rec.at("instruction").get<std::string>();
  if (rec.contains("backward_instruction")) {
    p.backward_instruction = rec.at("backward_instruction").get<std::string>();
  }
  p.source_path = rec.at("source").get<std::string>();
  p.target_path = rec.at("target").get<std::string>();
  p.frames = rec.value("frames", 0);
  return p;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, adapters::AdapterSet& adapters,
                            ArtifactStore& store) {
  PipelineResult result;
  std::vector<Category> categories = config.categories;
  if (categories.empty()) {
    categories.assign(core::all_categories().begin(), core::all_categories().end());
  }

  // ---- stage 1: pre-processing ----
  std::vector<StageJob> stage1;
  for (Category cat : categories) {
    for (int i = 0; i < config.n_clips; ++i) {
      stage1.push_back(make_stage1_job(cat, i, job_seed(config.seed, "s1", cat, i),
                                       config.clip_t, config.clip_h, config.clip_w,
                                       config.window_slack));
    }
  }
  run_jobs(stage1, adapters, store, config.workers, config.interrupt);

  // ---- stage 2: taxonomy-guided pair construction ----
  std::vector<StageJob> stage2;
  for (const auto& job : stage1) {
    if (job.status != JobStatus::Done) continue;
    int index = job.inputs.value("index", 0);
    stage2.push_back(make_stage2_job(job.category, index,
                                     job_seed(config.seed, "s2", job.category, index),
                                     job.artifacts.at("record"), config.creative_variants));
  }
  run_jobs(stage2, adapters, store, config.workers, config.interrupt);

  // collect generated pairs
  std::vector<json> pair_records;
  for (const auto& job : stage2) {
    if (job.status != JobStatus::Done) continue;
    json pairs = store.get_json(job.artifacts.at("pairs"));
    for (const auto& rec : pairs) pair_records.push_back(rec);
  }
  std::sort(pair_records.begin(), pair_records.end(),
            [](const json& a, const json& b) {
              return a.at("id").get<std::string>() < b.at("id").get<std::string>();
            });

  // ---- stage 3: judge scoring ----
  std::vector<StageJob> stage3;
  for (const auto& rec : pair_records) {
    std::string pair_id = rec.at("id").get<std::string>();
    Category cat = *core::parse_category(rec.at("category").get<std::string>());
    stage3.push_back(make_stage3_job(pair_id, cat,
                                     core::mix64(job_seed(config.seed, "s3", cat, 0),
                                                 core::fnv1a64(pair_id)),
                                     store.put_json(rec)));
  }
  run_jobs(stage3, adapters, store, config.workers, config.interrupt);

  std::vector<filtering::ScoredPair> scored;
  for (const auto& job : stage3) {
    if (job.status != JobStatus::Done) continue;
    json score = store.get_json(job.artifacts.at("score"));
    scored.push_back(filtering::parse_scored_manifest_line(score.dump()));
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.pair_id < b.pair_id; });

  auto [retained, report] =
      filtering::retain(scored, config.retention_threshold, config.retention_rule);

  // ---- outputs ----
  std::vector<core::ManifestPair> all_pairs;
  for (const auto& rec : pair_records) all_pairs.push_back(manifest_pair_from_record(rec));
  std::vector<core::ManifestPair> kept_pairs;
  {
    std::map<std::string, const core::ManifestPair*> by_id;
    for (const auto& p : all_pairs) by_id[p.id] = &p;
    for (const auto& s : retained) {
      auto it = by_id.find(s.pair_id);
      if (it != by_id.end()) kept_pairs.push_back(*it->second);
    }
  }
  result.manifest_path = store.root() / "pairs.jsonl";
  result.all_pairs_path = store.root() / "pairs_all.jsonl";
  result.scored_path = store.root() / "scored.jsonl";
  result.report_path = store.root() / "retention_report.json";
  result.jobs_path = store.root() / "jobs.jsonl";
  core::save_pair_manifest(kept_pairs, result.manifest_path);
  core::save_pair_manifest(all_pairs, result.all_pairs_path);
  {
    std::ostringstream out;
    for (const auto& s : scored) out << filtering::scored_manifest_line(s) << "\n";
    core::write_text_file_atomic(result.scored_path, out.str());
  }
  core::write_text_file_atomic(result.report_path, report.to_json().dump(2) + "\n");
  {
    std::ostringstream out;
    std::vector<const StageJob*> all_jobs;
    for (const auto& j : stage1) all_jobs.push_back(&j);
    for (const auto& j : stage2) all_jobs.push_back(&j);
    for (const auto& j : stage3) all_jobs.push_back(&j);
    std::sort(all_jobs.begin(), all_jobs.end(),
              [](const StageJob* a, const StageJob* b) { return a->id < b->id; });
    for (const StageJob* j : all_jobs) out << j->to_json().dump() << "\n";
    core::write_text_file_atomic(result.jobs_path, out.str());
    for (const StageJob* j : all_jobs) {
      result.jobs.push_back(*j);
      if (j->status == JobStatus::Failed) ++result.failed_jobs;
      if (j->status == JobStatus::Pending) result.interrupted = true;
    }
  }
  result.total_pairs = static_cast<int>(all_pairs.size());
  result.retained_pairs = static_cast<int>(kept_pairs.size());
  if (config.interrupt && config.interrupt->load()) result.interrupted = true;
  return result;
}

}  // namespace ivedit::pipeline
