// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <set>

#include "ivedit/core/errors.hpp"
#include "ivedit/core/validate.hpp"
#include "ivedit/pipeline/ops.hpp"
#include "ivedit/pipeline/orchestrator.hpp"

using namespace ivedit;
using namespace ivedit::pipeline;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Fixture {
  fs::path root;
  std::unique_ptr<ArtifactStore> store;
  adapters::AdapterSet adapters;

  explicit Fixture(const std::string& tag, uint64_t seed = 7) {
    root = fs::temp_directory_path() / ("ivedit_stage_" + tag);
    fs::remove_all(root);
    store = std::make_unique<ArtifactStore>(root);
    adapters = adapters::AdapterSet::desk_mocks(seed, store.get());
  }
  ~Fixture() { fs::remove_all(root); }
};

StageJob run_stage1(Fixture& fx, core::Category cat, int index = 0, uint64_t seed = 11) {
  StageJob job = make_stage1_job(cat, index, seed, 8, 32, 32, 8);
  job = run_stage(std::move(job), fx.adapters, *fx.store);
  REQUIRE(job.status == JobStatus::Done);
  return job;
}

}  // namespace

TEST_CASE("stage1 job produces a full clip record") {
  Fixture fx("s1");
  StageJob job = run_stage1(fx, core::Category::GlobalStyle);
  CHECK(job.artifacts.count("clip") == 1);
  CHECK(job.artifacts.count("canny_video") == 1);
  CHECK(job.artifacts.count("record") == 1);
  json record = fx.store->get_json(job.artifacts.at("record"));
  CHECK(record.at("caption").get<std::string>().size() > 10);
  CHECK(record.at("objects").size() >= 2);
  // masks align with the clip geometry
  auto clip = fx.store->get_clip(record.at("clip").get<std::string>());
  for (const auto& obj : record.at("objects")) {
    auto mask = fx.store->get_mask(obj.at("mask").get<std::string>());
    CHECK(mask.t == clip.t);
    CHECK(mask.h == clip.h);
    CHECK(mask.w == clip.w);
    CHECK(mask.count() > 0);
    CHECK(obj.at("local_caption").get<std::string>().size() > 5);
  }
  auto edges = fx.store->get_clip(record.at("edge_video").get<std::string>());
  CHECK(edges.c == 1);
  CHECK(edges.t == clip.t);
}

TEST_CASE("stage1 rerun of a done job is a no-op (store checksum equal)") {
  Fixture fx("idem");
  StageJob job = run_stage1(fx, core::Category::LocalAdd);
  std::string checksum = fx.store->tree_checksum();
  json before = job.to_json();
  StageJob again = run_stage(job, fx.adapters, *fx.store);
  CHECK(again.to_json() == before);
  CHECK(fx.store->tree_checksum() == checksum);
}

TEST_CASE("adapter failure marks the job failed at the right step") {
  Fixture fx("fault");
  // caption is step index 1; make it fail all attempts
  adapters::EndpointConfig cfg = fx.adapters.endpoint(adapters::Capability::Caption).config();
  cfg.max_retries = 1;
  cfg.options["fault_schedule"] = json::array({"fail", "fail", "fail", "fail"});
  fx.adapters.add(cfg, fx.store.get());
  StageJob job = make_stage1_job(core::Category::GlobalStyle, 0, 5, 8, 32, 32, 8);
  job = run_stage(std::move(job), fx.adapters, *fx.store);
  CHECK(job.status == JobStatus::Failed);
  CHECK(job.failed_step == 1);
  CHECK(job.error.find("exhausted") != std::string::npos);
  // the artifact of step 0 is present
  CHECK(job.artifacts.count("acquire_clip") == 1);
  CHECK(fx.store->exists(job.artifacts.at("acquire_clip")));

  // resuming after the fault clears succeeds and keeps step-0 output
  adapters::EndpointConfig ok = cfg;
  ok.options.erase("fault_schedule");
  fx.adapters.add(ok, fx.store.get());
  std::string clip_ref = job.artifacts.at("acquire_clip");
  StageJob resumed = run_stage(job, fx.adapters, *fx.store);
  CHECK(resumed.status == JobStatus::Done);
  CHECK(resumed.artifacts.at("acquire_clip") == clip_ref);
}

TEST_CASE("stage2 per-category jobs emit valid pairs with the right shape") {
  Fixture fx("s2");
  int expected_pairs[core::kCategoryCount] = {1, 1, 1, 1, 1, 3, 6, 6};
  for (int ci = 0; ci < core::kCategoryCount; ++ci) {
    core::Category cat = static_cast<core::Category>(ci);
    StageJob s1 = run_stage1(fx, cat, ci, 100 + ci);
    StageJob s2 = make_stage2_job(cat, ci, 200 + ci, s1.artifacts.at("record"), 3);
    s2 = run_stage(std::move(s2), fx.adapters, *fx.store);
    std::string ctx_msg = std::string(core::category_name(cat)) + ": " + s2.error;
    REQUIRE_MESSAGE(s2.status == JobStatus::Done, ctx_msg);
    json pairs = fx.store->get_json(s2.artifacts.at("pairs"));
    CHECK(static_cast<int>(pairs.size()) == expected_pairs[ci]);
    for (const auto& rec : pairs) {
      CHECK(rec.at("category").get<std::string>() == core::category_name(cat));
      auto src = fx.store->get_clip(rec.at("source").get<std::string>());
      auto tgt = fx.store->get_clip(rec.at("target").get<std::string>());
      core::EditPair pair;
      pair.source = src;
      pair.target = tgt;
      pair.category = cat;
      pair.instruction = rec.at("instruction").get<std::string>();
      pair.id = rec.at("id").get<std::string>();
      CHECK(core::validate_pair(pair).empty());
    }
  }
}

TEST_CASE("local add/remove pairs: target equals original, diff inside dilated mask") {
  Fixture fx("locality");
  for (core::Category cat : {core::Category::LocalAdd, core::Category::LocalRemove}) {
    StageJob s1 = run_stage1(fx, cat, 0, 300 + static_cast<int>(cat));
    json record = fx.store->get_json(s1.artifacts.at("record"));
    auto original = fx.store->get_clip(record.at("clip").get<std::string>());
    StageJob s2 = make_stage2_job(cat, 0, 400 + static_cast<int>(cat),
                                  s1.artifacts.at("record"), 3);
    s2 = run_stage(std::move(s2), fx.adapters, *fx.store);
    REQUIRE(s2.status == JobStatus::Done);
    json pairs = fx.store->get_json(s2.artifacts.at("pairs"));
    REQUIRE(pairs.size() == 1);
    auto src = fx.store->get_clip(pairs[0].at("source").get<std::string>());
    auto tgt = fx.store->get_clip(pairs[0].at("target").get<std::string>());
    // target is bit-identical to the original clip
    CHECK(tgt.data == core::snap_to_u8_grid(original).data);
    // support of the edit: the object mask (stage-1 object 0 for add, the
    // detected added object for remove), dilated by one pixel
    core::MaskVideo mask =
        cat == core::Category::LocalAdd
            ? fx.store->get_mask(record.at("objects")[0].at("mask").get<std::string>())
            : fx.store->get_mask(s2.artifacts.at("segment_object"));
    core::MaskVideo support = dilate_mask(mask, 1);
    int64_t diffs_outside = 0;
    for (int f = 0; f < src.t; ++f) {
      for (int y = 0; y < src.h; ++y) {
        for (int x = 0; x < src.w; ++x) {
          bool differs = false;
          for (int c = 0; c < src.c; ++c) {
            differs = differs || src.at(f, y, x, c) != tgt.at(f, y, x, c);
          }
          if (differs && !support.at(f, y, x)) ++diffs_outside;
        }
      }
    }
    CHECK(diffs_outside == 0);
  }
}

TEST_CASE("stage3 scores a pair end to end") {
  Fixture fx("s3");
  StageJob s1 = run_stage1(fx, core::Category::GlobalStyle, 0, 500);
  StageJob s2 = make_stage2_job(core::Category::GlobalStyle, 0, 501,
                                s1.artifacts.at("record"), 3);
  s2 = run_stage(std::move(s2), fx.adapters, *fx.store);
  REQUIRE(s2.status == JobStatus::Done);
  json pairs = fx.store->get_json(s2.artifacts.at("pairs"));
  StageJob s3 = make_stage3_job(pairs[0].at("id").get<std::string>(),
                                core::Category::GlobalStyle, 502,
                                fx.store->put_json(pairs[0]));
  s3 = run_stage(std::move(s3), fx.adapters, *fx.store);
  REQUIRE(s3.status == JobStatus::Done);
  json score = fx.store->get_json(s3.artifacts.at("score"));
  CHECK(score.at("scores").at("compliance").get<int>() >= 3);  // lenient judge
  CHECK(score.at("scores").at("consistency").get<int>() <=
        score.at("scores").at("compliance").get<int>());
}

TEST_CASE("job json round trip") {
  StageJob job = make_stage2_job(core::Category::CameraMultiShot, 2, 99, "objects/ab/cd.json", 4);
  job.status = JobStatus::Failed;
  job.failed_step = 1;
  job.artifacts["gen_shot_prompts"] = "objects/xx/yy.json";
  job.error = "boom";
  StageJob back = StageJob::from_json(job.to_json());
  CHECK(back.id == job.id);
  CHECK(back.category == job.category);
  CHECK(back.steps.size() == job.steps.size());
  CHECK(back.steps[1].kind == StepSpec::Kind::Adapter);
  CHECK(back.status == JobStatus::Failed);
  CHECK(back.failed_step == 1);
  CHECK(back.artifacts.at("gen_shot_prompts") == "objects/xx/yy.json");
  CHECK(back.error == "boom");
}

TEST_CASE("full pipeline: all categories, deterministic manifests, valid pairs") {
  PipelineConfig cfg;
  cfg.n_clips = 1;
  cfg.seed = 7;
  cfg.workers = 2;

  std::string manifest_a, manifest_b, scored_a, scored_b, jobs_a, jobs_b;
  for (int runidx = 0; runidx < 2; ++runidx) {
    Fixture fx("full" + std::to_string(runidx), 7);
    auto result = run_pipeline(cfg, fx.adapters, *fx.store);
    CHECK(result.failed_jobs == 0);
    CHECK(result.total_pairs == 1 + 1 + 1 + 1 + 1 + 3 + 6 + 6);
    CHECK(result.retained_pairs >= 8);  // lenient judge keeps most pairs
    auto pairs = core::load_pair_manifest(result.manifest_path);
    std::set<core::Category> cats;
    for (const auto& p : pairs) {
      cats.insert(p.category);
      core::EditPair pair = core::load_edit_pair(p, fx.store->root());
      CHECK(core::validate_pair(pair).empty());
    }
    CHECK(cats.size() == core::kCategoryCount);  // every category retained >= 1
    std::string manifest = core::read_text_file(result.manifest_path);
    std::string scored = core::read_text_file(result.scored_path);
    std::string jobs = core::read_text_file(result.jobs_path);
    if (runidx == 0) {
      manifest_a = manifest;
      scored_a = scored;
      jobs_a = jobs;
    } else {
      manifest_b = manifest;
      scored_b = scored;
      jobs_b = jobs;
    }
  }
  CHECK(manifest_a == manifest_b);  // byte-identical across runs
  CHECK(scored_a == scored_b);
  CHECK(jobs_a == jobs_b);
}
