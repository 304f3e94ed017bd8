// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/pipeline/stage.hpp"

#include <algorithm>

#include "ivedit/adapters/mock_world.hpp"
#include "ivedit/bench/bench.hpp"
#include "ivedit/core/errors.hpp"
#include "ivedit/core/rng.hpp"
#include "ivedit/core/validate.hpp"
#include "ivedit/filtering/judge.hpp"
#include "ivedit/pipeline/builders.hpp"
#include "ivedit/pipeline/ops.hpp"
#include "ivedit/pipeline/subtitles.hpp"

using nlohmann::json;

namespace ivedit::pipeline {

using adapters::Capability;
using adapters::Request;
using core::Category;
using core::DataError;
using core::VideoClip;
namespace mw = adapters::mockworld;

std::string_view job_status_name(JobStatus s) {
  switch (s) {
    case JobStatus::Pending: return "pending";
    case JobStatus::Running: return "running";
    case JobStatus::Done: return "done";
    case JobStatus::Failed: return "failed";
  }
  return "?";
}

namespace {

JobStatus status_from_name(const std::string& s) {
  if (s == "pending") return JobStatus::Pending;
  if (s == "running") return JobStatus::Running;
  if (s == "done") return JobStatus::Done;
  if (s == "failed") return JobStatus::Failed;
  throw DataError("unknown job status " + s);
}

json step_to_json(const StepSpec& s) {
  json j{{"name", s.name},
         {"kind", s.kind == StepSpec::Kind::Native ? "native" : "adapter"}};
  if (s.kind == StepSpec::Kind::Adapter) {
    j["capability"] = std::string(adapters::capability_name(s.capability));
  }
  return j;
}

StepSpec step_from_json(const json& j) {
  StepSpec s;
  s.name = j.at("name").get<std::string>();
  s.kind = j.at("kind").get<std::string>() == "native" ? StepSpec::Kind::Native
                                                       : StepSpec::Kind::Adapter;
  if (s.kind == StepSpec::Kind::Adapter) {
    s.capability = *adapters::parse_capability(j.at("capability").get<std::string>());
  }
  return s;
}

}  // namespace

json StageJob::to_json() const {
  json steps_json = json::array();
  for (const auto& s : steps) steps_json.push_back(step_to_json(s));
  json artifacts_json = json::object();
  for (const auto& [k, v] : artifacts) artifacts_json[k] = v;
  return json{{"id", id},
              {"category", std::string(core::category_name(category))},
              {"steps", steps_json},
              {"inputs", inputs},
              {"status", std::string(job_status_name(status))},
              {"failed_step", failed_step},
              {"artifacts", artifacts_json},
              {"error", error}};
}

StageJob StageJob::from_json(const json& j) {
  StageJob job;
  job.id = j.at("id").get<std::string>();
  job.category = *core::parse_category(j.at("category").get<std::string>());
  for (const auto& s : j.at("steps")) job.steps.push_back(step_from_json(s));
  job.inputs = j.at("inputs");
  job.status = status_from_name(j.at("status").get<std::string>());
  job.failed_step = j.at("failed_step").get<int>();
  for (const auto& [k, v] : j.at("artifacts").items()) {
    job.artifacts[k] = v.get<std::string>();
  }
  job.error = j.value("error", "");
  return job;
}

StageJob make_stage1_job(Category category, int index, uint64_t seed, int clip_t, int clip_h,
                         int clip_w, int window_slack) {
  StageJob job;
  job.id = "s1-" + std::string(core::category_name(category)) + "-" + std::to_string(index);
  job.category = category;
  job.inputs = json{{"seed", seed},      {"index", index},   {"clip_t", clip_t},
                    {"clip_h", clip_h},  {"clip_w", clip_w}, {"window_slack", window_slack}};
  job.steps = {
      {"acquire_clip", StepSpec::Kind::Native, {}},
      {"caption", StepSpec::Kind::Adapter, Capability::Caption},
      {"detect_objects", StepSpec::Kind::Adapter, Capability::DetectSegment},
      {"local_captions", StepSpec::Kind::Adapter, Capability::LocalDescribe},
      {"canny_video", StepSpec::Kind::Native, {}},
      {"depth_video", StepSpec::Kind::Adapter, Capability::Depth},
      {"record", StepSpec::Kind::Native, {}},
  };
  return job;
}

StageJob make_stage2_job(Category category, int index, uint64_t seed,
                         const std::string& record_ref, int creative_variants) {
  StageJob job;
  job.id = "s2-" + std::string(core::category_name(category)) + "-" + std::to_string(index);
  job.category = category;
  job.inputs = json{{"seed", seed},
                    {"index", index},
                    {"record", record_ref},
                    {"creative_variants", creative_variants}};
  using K = StepSpec::Kind;
  switch (category) {
    case Category::GlobalStyle:
    case Category::LocalChange:
      job.steps = {{"gen_instruction", K::Adapter, Capability::InstructionGenerate},
                   {"edit_frame0", K::Adapter, Capability::ImageEdit},
                   {"controlled_video", K::Adapter, Capability::ControlledVideo},
                   {"make_pairs", K::Native, {}}};
      break;
    case Category::BackgroundChange:
      job.steps = {{"select_foreground", K::Native, {}},
                   {"gen_instruction", K::Adapter, Capability::InstructionGenerate},
                   {"edit_frame0", K::Adapter, Capability::ImageEdit},
                   {"mask_control", K::Native, {}},
                   {"controlled_video", K::Adapter, Capability::ControlledVideo},
                   {"make_pairs", K::Native, {}}};
      break;
    case Category::LocalAdd:
      job.steps = {{"gen_instruction", K::Adapter, Capability::InstructionGenerate},
                   {"inpaint_object", K::Adapter, Capability::Inpaint},
                   {"make_pairs", K::Native, {}}};
      break;
    case Category::LocalRemove:
      job.steps = {{"gen_instruction", K::Adapter, Capability::InstructionGenerate},
                   {"edit_frame0", K::Adapter, Capability::ImageEdit},
                   {"i2v", K::Adapter, Capability::I2V},
                   {"segment_object", K::Adapter, Capability::DetectSegment},
                   {"paste_object", K::Native, {}},
                   {"make_pairs", K::Native, {}}};
      break;
    case Category::SubtitlesEdit:
      job.steps = {{"gen_texts", K::Adapter, Capability::InstructionGenerate},
                   {"make_pairs", K::Native, {}}};
      break;
    case Category::CameraMultiShot:
      job.steps = {{"gen_shot_prompts", K::Adapter, Capability::InstructionGenerate},
                   {"multi_shot", K::Adapter, Capability::MultiShotGenerate},
                   {"segment_shots", K::Native, {}},
                   {"make_pairs", K::Native, {}}};
      break;
    case Category::CreativeEdit:
      job.steps = {{"gen_creative_prompts", K::Adapter, Capability::InstructionGenerate},
                   {"i2v_variants", K::Adapter, Capability::I2V},
                   {"make_pairs", K::Adapter, Capability::InstructionGenerate}};
      break;
  }
  return job;
}

StageJob make_stage3_job(const std::string& pair_id, Category category, uint64_t seed,
                         const std::string& pair_ref) {
  StageJob job;
  job.id = "s3-" + pair_id;
  job.category = category;
  job.inputs = json{{"seed", seed}, {"pair", pair_ref}, {"pair_id", pair_id}};
  job.steps = {{"judge", StepSpec::Kind::Adapter, Capability::Judge},
               {"score", StepSpec::Kind::Native, {}}};
  return job;
}

namespace {

// ---- step helpers --------------------------------------------------------

struct StepContext {
  StageJob& job;
  adapters::AdapterSet& adapters;
  ArtifactStore& store;

  uint64_t seed() const { return job.inputs.at("seed").get<uint64_t>(); }
  int index() const { return job.inputs.value("index", 0); }

  std::string art(const std::string& name) const {
    auto it = job.artifacts.find(name);
    if (it == job.artifacts.end()) {
      throw DataError(job.id + ": missing upstream artifact '" + name + "'");
    }
    return it->second;
  }

  json record() const { return store.get_json(job.inputs.at("record").get<std::string>()); }
  VideoClip record_clip() const {
    return store.get_clip(record().at("clip").get<std::string>());
  }

  adapters::Response call(Capability cap, const std::string& tag, json payload) const {
    return adapters.call(cap, Request{job.id + "/" + tag, std::move(payload)});
  }

  std::string put_frame0(const VideoClip& clip) const {
    VideoClip f0(1, clip.h, clip.w, clip.c, clip.fps, clip.id);
    std::copy(clip.data.begin(),
              clip.data.begin() + static_cast<long>(f0.size()), f0.data.begin());
    return store.put_clip(f0);
  }
};

json pair_record(const core::EditPair& pair, ArtifactStore& store) {
  auto violations = core::validate_pair(pair);
  if (!violations.empty()) {
    std::string msg = "pair " + pair.id + " failed validation:";
    for (const auto& v : violations) msg += " [" + v.field + ": " + v.rule + "]";
    throw DataError(msg);
  }
  json j{{"id", pair.id},
         {"category", std::string(core::category_name(pair.category))},
         {"instruction", pair.instruction},
         {"source", store.put_clip(pair.source)},
         {"target", store.put_clip(pair.target)},
         {"frames", pair.source.t}};
  if (pair.backward_instruction) j["backward_instruction"] = *pair.backward_instruction;
  return j;
}

std::string pair_base_id(const StepContext& ctx) {
  return std::string(core::category_name(ctx.job.category)) + "-" +
         std::to_string(ctx.index());
}

// ---- stage 1 -------------------------------------------------------------

void step_acquire_clip(StepContext& ctx) {
  const json& in = ctx.job.inputs;
  int clip_t = in.at("clip_t"), clip_h = in.at("clip_h"), clip_w = in.at("clip_w");
  int slack = in.at("window_slack");
  core::Rng rng(core::mix64(ctx.seed(), core::fnv1a64("acquire")));
  int n_objects = 2 + static_cast<int>(rng.next_int(0, 1));
  uint64_t scene_seed = rng.fork("scene").next_u64();
  mw::Scene scene = mw::make_scene(scene_seed, n_objects, clip_h, clip_w);
  int total = clip_t + slack;
  core::Rng wrng = rng.fork("window");
  Window win = sample_clip_window(total, wrng, {clip_t, clip_t});
  VideoClip clip = mw::render_scene(scene, clip_t, clip_h, clip_w, 8.0f, win.start);
  ctx.job.artifacts["acquire_clip"] = ctx.store.put_clip(clip);
  ctx.job.artifacts["clip"] = ctx.job.artifacts["acquire_clip"];
}

void step_caption(StepContext& ctx) {
  auto resp = ctx.call(Capability::Caption, "caption", json{{"clip", ctx.art("clip")}});
  ctx.job.artifacts["caption"] = ctx.store.put_json(resp.payload);
}

void step_detect_objects(StepContext& ctx) {
  json caption = ctx.store.get_json(ctx.art("caption"));
  auto resp = ctx.call(
      Capability::DetectSegment, "detect",
      json{{"clip", ctx.art("clip")}, {"names", caption.at("object_names")}});
  ctx.job.artifacts["detect_objects"] = ctx.store.put_json(resp.payload.at("objects"));
}

void step_local_captions(StepContext& ctx) {
  json objects = ctx.store.get_json(ctx.art("detect_objects"));
  json captions = json::array();
  for (const auto& obj : objects) {
    auto resp = ctx.call(Capability::LocalDescribe, "describe",
                         json{{"clip", ctx.art("clip")}, {"name", obj.at("name")}});
    captions.push_back(resp.payload.at("caption"));
  }
  ctx.job.artifacts["local_captions"] = ctx.store.put_json(captions);
}

void step_canny_video(StepContext& ctx) {
  VideoClip clip = ctx.store.get_clip(ctx.art("clip"));
  ctx.job.artifacts["canny_video"] = ctx.store.put_clip(canny_edges(clip));
}

void step_depth_video(StepContext& ctx) {
  auto resp = ctx.call(Capability::Depth, "depth", json{{"clip", ctx.art("clip")}});
  ctx.job.artifacts["depth_video"] = resp.payload.at("depth").get<std::string>();
}

void step_record(StepContext& ctx) {
  json caption = ctx.store.get_json(ctx.art("caption"));
  json objects = ctx.store.get_json(ctx.art("detect_objects"));
  json local_captions = ctx.store.get_json(ctx.art("local_captions"));
  for (size_t i = 0; i < objects.size(); ++i) {
    objects[i]["local_caption"] =
        i < local_captions.size() ? local_captions[i] : json("an object");
  }
  json record{{"clip", ctx.art("clip")},
              {"caption", caption.at("caption")},
              {"objects", objects},
              {"edge_video", ctx.art("canny_video")},
              {"depth_video", ctx.art("depth_video")}};
  ctx.job.artifacts["record"] = ctx.store.put_json(record);
}

// ---- stage 2 -------------------------------------------------------------

json instruction_context(const StepContext& ctx) {
  json record = ctx.record();
  json context{{"mode", "pair"}};
  switch (ctx.job.category) {
    case Category::LocalChange:
      if (!record.at("objects").empty()) {
        context["local_caption"] = record.at("objects")[0].at("local_caption");
      }
      break;
    case Category::LocalAdd:
      if (!record.at("objects").empty()) {
        context["object"] = record.at("objects")[0].at("local_caption");
      }
      break;
    default:
      break;
  }
  return context;
}

void step_gen_instruction(StepContext& ctx) {
  auto resp = ctx.call(Capability::InstructionGenerate, "instruction",
                       json{{"category", std::string(core::category_name(ctx.job.category))},
                            {"seed", ctx.seed()},
                            {"context", instruction_context(ctx)}});
  ctx.job.artifacts["gen_instruction"] = ctx.store.put_json(resp.payload);
}

void step_select_foreground(StepContext& ctx) {
  json record = ctx.record();
  const json& objects = record.at("objects");
  if (objects.empty()) throw DataError(ctx.job.id + ": no objects for foreground selection");
  MaskSet set;
  std::vector<core::MaskVideo> mask_videos;
  for (const auto& obj : objects) {
    core::MaskVideo mv = ctx.store.get_mask(obj.at("mask").get<std::string>());
    core::MaskFrame frame0(mv.h, mv.w);
    for (int y = 0; y < mv.h; ++y) {
      for (int x = 0; x < mv.w; ++x) frame0.at(y, x) = mv.at(0, y, x);
    }
    set.masks.push_back(std::move(frame0));
    set.names.push_back(obj.at("name").get<std::string>());
    mask_videos.push_back(std::move(mv));
  }
  // mock image-foreground detector: the union of a seeded object subset
  core::Rng rng(core::mix64(ctx.seed(), core::fnv1a64("foreground")));
  std::vector<int> truth = {0};
  for (int i = 1; i < static_cast<int>(set.masks.size()); ++i) {
    if (rng.next_double() < 0.5) truth.push_back(i);
  }
  core::MaskFrame fg = union_masks(set, truth);
  auto selected = select_foreground_subset(fg, set, 0.95);
  if (!selected) {
    throw DataError(ctx.job.id + ": no object-mask combination matches the foreground");
  }
  ctx.job.artifacts["select_foreground"] =
      ctx.store.put_json(json{{"indices", *selected}, {"detector_truth", truth}});
}

void step_edit_frame0(StepContext& ctx) {
  json record = ctx.record();
  json gen = ctx.store.get_json(ctx.art("gen_instruction"));
  std::string instruction;
  if (ctx.job.category == Category::LocalRemove) {
    instruction = gen.at("extras").at("image_add_instruction").get<std::string>();
  } else {
    instruction = gen.at("extras").at("image_instruction").get<std::string>();
  }
  VideoClip clip = ctx.store.get_clip(record.at("clip").get<std::string>());
  auto resp = ctx.call(Capability::ImageEdit, "edit_frame0",
                       json{{"image", ctx.put_frame0(clip)}, {"instruction", instruction}});
  ctx.job.artifacts["edit_frame0"] = resp.payload.at("image").get<std::string>();
}

void step_mask_control(StepContext& ctx) {
  json record = ctx.record();
  json fg = ctx.store.get_json(ctx.art("select_foreground"));
  VideoClip edges = ctx.store.get_clip(record.at("edge_video").get<std::string>());
  core::MaskVideo fg_mask(edges.t, edges.h, edges.w);
  for (const auto& idx : fg.at("indices")) {
    core::MaskVideo mv = ctx.store.get_mask(
        record.at("objects")[idx.get<size_t>()].at("mask").get<std::string>());
    for (size_t i = 0; i < fg_mask.data.size(); ++i) fg_mask.data[i] |= mv.data[i];
  }
  ctx.job.artifacts["mask_control"] = ctx.store.put_clip(mask_background_of(edges, fg_mask));
}

void step_controlled_video(StepContext& ctx) {
  json record = ctx.record();
  json gen = ctx.store.get_json(ctx.art("gen_instruction"));
  std::string control_ref = ctx.job.category == Category::BackgroundChange
                                ? ctx.art("mask_control")
                                : record.at("edge_video").get<std::string>();
  auto resp = ctx.call(Capability::ControlledVideo, "controlled",
                       json{{"control", control_ref},
                            {"first_frame", ctx.art("edit_frame0")},
                            {"prompt", gen.at("extras").at("video_prompt")}});
  ctx.job.artifacts["controlled_video"] = resp.payload.at("video").get<std::string>();
}

void step_inpaint_object(StepContext& ctx) {
  json record = ctx.record();
  if (record.at("objects").empty()) {
    throw DataError(ctx.job.id + ": no object to inpaint");
  }
  auto resp = ctx.call(Capability::Inpaint, "inpaint",
                       json{{"clip", record.at("clip")},
                            {"mask", record.at("objects")[0].at("mask")}});
  ctx.job.artifacts["inpaint_object"] = resp.payload.at("video").get<std::string>();
}

void step_i2v(StepContext& ctx) {
  json record = ctx.record();
  json gen = ctx.store.get_json(ctx.art("gen_instruction"));
  VideoClip clip = ctx.store.get_clip(record.at("clip").get<std::string>());
  auto resp = ctx.call(Capability::I2V, "i2v",
                       json{{"image", ctx.art("edit_frame0")},
                            {"prompt", gen.at("instruction")},
                            {"frames", clip.t}});
  ctx.job.artifacts["i2v"] = resp.payload.at("video").get<std::string>();
}

void step_segment_object(StepContext& ctx) {
  auto resp = ctx.call(Capability::DetectSegment, "segment_new",
                       json{{"clip", ctx.art("i2v")}});
  const json& objects = resp.payload.at("objects");
  if (objects.empty()) {
    throw DataError(ctx.job.id + ": segmentation found no added object");
  }
  ctx.job.artifacts["segment_object"] = objects[0].at("mask").get<std::string>();
}

void step_paste_object(StepContext& ctx) {
  json record = ctx.record();
  VideoClip base = ctx.store.get_clip(record.at("clip").get<std::string>());
  VideoClip donor = ctx.store.get_clip(ctx.art("i2v"));
  core::MaskVideo mask = ctx.store.get_mask(ctx.art("segment_object"));
  ctx.job.artifacts["paste_object"] = ctx.store.put_clip(composite_masked(base, donor, mask));
}

void step_gen_texts(StepContext& ctx) {
  auto resp = ctx.call(Capability::InstructionGenerate, "texts",
                       json{{"category", "SubtitlesEdit"},
                            {"seed", ctx.seed()},
                            {"context", json{{"mode", "texts"}}}});
  ctx.job.artifacts["gen_texts"] = ctx.store.put_json(resp.payload);
}

void step_gen_shot_prompts(StepContext& ctx) {
  json record = ctx.record();
  json context{{"mode", "shots"}};
  if (!record.at("objects").empty()) {
    context["subject"] = record.at("objects")[0].at("name");
  }
  auto resp = ctx.call(Capability::InstructionGenerate, "shots",
                       json{{"category", "CameraMultiShot"},
                            {"seed", ctx.seed()},
                            {"context", context}});
  ctx.job.artifacts["gen_shot_prompts"] = ctx.store.put_json(resp.payload);
}

void step_multi_shot(StepContext& ctx) {
  json record = ctx.record();
  json gen = ctx.store.get_json(ctx.art("gen_shot_prompts"));
  VideoClip clip = ctx.store.get_clip(record.at("clip").get<std::string>());
  auto resp = ctx.call(Capability::MultiShotGenerate, "multishot",
                       json{{"image", ctx.put_frame0(clip)},
                            {"prompts", gen.at("extras").at("prompts")}});
  ctx.job.artifacts["multi_shot"] = resp.payload.at("video").get<std::string>();
  ctx.job.artifacts["shot_order"] = ctx.store.put_json(resp.payload.at("shot_order"));
}

void step_segment_shots(StepContext& ctx) {
  VideoClip video = ctx.store.get_clip(ctx.art("multi_shot"));
  json order = ctx.store.get_json(ctx.art("shot_order"));
  auto segments = segment_shots(video, 0.1f);
  if (segments.size() != order.size()) {
    throw DataError(ctx.job.id + ": shot detection found " +
                    std::to_string(segments.size()) + " segments, expected " +
                    std::to_string(order.size()));
  }
  json out = json::array();
  for (size_t i = 0; i < segments.size(); ++i) {
    out.push_back(json{{"start", segments[i].start},
                       {"end", segments[i].end},
                       {"type", order[i].get<std::string>()}});
  }
  ctx.job.artifacts["segment_shots"] = ctx.store.put_json(out);
}

void step_gen_creative_prompts(StepContext& ctx) {
  int n = ctx.job.inputs.value("creative_variants", 3);
  auto resp = ctx.call(Capability::InstructionGenerate, "creative",
                       json{{"category", "CreativeEdit"},
                            {"seed", ctx.seed()},
                            {"context", json{{"mode", "creative_prompts"}, {"n", n}}}});
  ctx.job.artifacts["gen_creative_prompts"] = ctx.store.put_json(resp.payload);
}

void step_i2v_variants(StepContext& ctx) {
  json record = ctx.record();
  json gen = ctx.store.get_json(ctx.art("gen_creative_prompts"));
  VideoClip clip = ctx.store.get_clip(record.at("clip").get<std::string>());
  std::string frame0 = ctx.put_frame0(clip);
  json refs = json::array();
  int k = 0;
  for (const auto& prompt : gen.at("extras").at("prompts")) {
    auto resp = ctx.call(Capability::I2V, "variant" + std::to_string(k++),
                         json{{"image", frame0}, {"prompt", prompt}, {"frames", clip.t}});
    refs.push_back(resp.payload.at("video"));
  }
  ctx.job.artifacts["i2v_variants"] = ctx.store.put_json(refs);
}

void step_make_pairs(StepContext& ctx) {
  json record = ctx.record();
  VideoClip clip = ctx.store.get_clip(record.at("clip").get<std::string>());
  std::string base = pair_base_id(ctx);
  std::vector<core::EditPair> pairs;

  switch (ctx.job.category) {
    case Category::GlobalStyle:
    case Category::BackgroundChange:
    case Category::LocalChange: {
      json gen = ctx.store.get_json(ctx.art("gen_instruction"));
      core::EditPair p;
      p.source = clip;
      p.target = ctx.store.get_clip(ctx.art("controlled_video"));
      p.category = ctx.job.category;
      p.instruction = gen.at("instruction").get<std::string>();
      p.backward_instruction = gen.at("extras").at("backward_instruction").get<std::string>();
      pairs.push_back(std::move(p));
      break;
    }
    case Category::LocalAdd: {
      json gen = ctx.store.get_json(ctx.art("gen_instruction"));
      std::string caption = record.at("objects").empty()
                                ? "an object"
                                : record.at("objects")[0].at("local_caption").get<std::string>();
      pairs.push_back(build_local_add_pair(clip, ctx.store.get_clip(ctx.art("inpaint_object")),
                                           caption, gen.at("instruction").get<std::string>()));
      break;
    }
    case Category::LocalRemove: {
      json gen = ctx.store.get_json(ctx.art("gen_instruction"));
      pairs.push_back(build_local_remove_pair(
          clip, ctx.store.get_clip(ctx.art("paste_object")),
          gen.at("extras").at("object").get<std::string>(),
          gen.at("instruction").get<std::string>()));
      break;
    }
    case Category::SubtitlesEdit: {
      json gen = ctx.store.get_json(ctx.art("gen_texts"));
      SubtitlePosition pos = static_cast<SubtitlePosition>(ctx.index() % 3);
      SubtitleStyle style;
      core::Rng rng(core::mix64(ctx.seed(), core::fnv1a64("substyle")));
      style.id = static_cast<int>(rng.next_int(0, 2));
      style.color = {static_cast<float>(0.6 + 0.4 * rng.next_double()),
                     static_cast<float>(0.6 + 0.4 * rng.next_double()),
                     static_cast<float>(0.6 + 0.4 * rng.next_double())};
      auto triplet = build_subtitle_triplet(clip,
                                            gen.at("extras").at("text_a").get<std::string>(),
                                            gen.at("extras").at("text_b").get<std::string>(),
                                            pos, style);
      pairs = {triplet.add, triplet.remove, triplet.replace};
      break;
    }
    case Category::CameraMultiShot: {
      VideoClip video = ctx.store.get_clip(ctx.art("multi_shot"));
      json segs = ctx.store.get_json(ctx.art("segment_shots"));
      LabeledShots shots;
      for (const auto& s : segs) {
        ShotSegment seg{s.at("start").get<int>(), s.at("end").get<int>(), ShotType::Unknown};
        std::string type = s.at("type").get<std::string>();
        if (type == "close") {
          seg.type = ShotType::Close;
          shots.close = seg;
        } else if (type == "medium") {
          seg.type = ShotType::Medium;
          shots.medium = seg;
        } else if (type == "wide") {
          seg.type = ShotType::Wide;
          shots.wide = seg;
        }
      }
      pairs = build_camera_pairs(shots, video);
      break;
    }
    case Category::CreativeEdit: {
      json gen = ctx.store.get_json(ctx.art("gen_creative_prompts"));
      json refs = ctx.store.get_json(ctx.art("i2v_variants"));
      std::vector<VideoClip> videos;
      for (const auto& r : refs) videos.push_back(ctx.store.get_clip(r.get<std::string>()));
      const json& prompts = gen.at("extras").at("prompts");
      auto instruction_for = [&](int i, int j) {
        auto resp = ctx.call(
            Capability::InstructionGenerate,
            "pair" + std::to_string(i) + "_" + std::to_string(j),
            json{{"category", "CreativeEdit"},
                 {"seed", ctx.seed()},
                 {"context", json{{"mode", "creative_pair"},
                                  {"from", prompts[static_cast<size_t>(i)]},
                                  {"to", prompts[static_cast<size_t>(j)]}}}});
        return resp.payload.at("instruction").get<std::string>();
      };
      pairs = build_creative_pairs(videos, instruction_for);
      break;
    }
  }

  json out = json::array();
  for (size_t k = 0; k < pairs.size(); ++k) {
    pairs[k].id = base + "-" + std::to_string(k);
    out.push_back(pair_record(pairs[k], ctx.store));
  }
  ctx.job.artifacts["make_pairs"] = ctx.store.put_json(out);
  ctx.job.artifacts["pairs"] = ctx.job.artifacts["make_pairs"];
}

// ---- stage 3 -------------------------------------------------------------

void step_judge(StepContext& ctx) {
  json pair = ctx.store.get_json(ctx.job.inputs.at("pair").get<std::string>());
  Category cat = *core::parse_category(pair.at("category").get<std::string>());
  std::string prompt =
      bench::build_judge_prompt(cat, pair.at("instruction").get<std::string>());
  auto resp = ctx.call(Capability::Judge, "judge",
                       json{{"source", pair.at("source")},
                            {"edited", pair.at("target")},
                            {"prompt", prompt}});
  std::string raw = resp.payload.at("raw").get<std::string>();
  ctx.job.artifacts["judge"] =
      ctx.store.put_bytes(std::vector<uint8_t>(raw.begin(), raw.end()), "txt");
}

void step_score(StepContext& ctx) {
  std::string pair_id = ctx.job.inputs.at("pair_id").get<std::string>();
  auto raw_bytes = ctx.store.get_bytes(ctx.art("judge"));
  std::string raw(raw_bytes.begin(), raw_bytes.end());
  core::ScoreTriple triple =
      filtering::enforce_compliance_cap(filtering::parse_judge_response(raw));
  filtering::ScoredPair scored{pair_id, ctx.job.category, triple};
  ctx.job.artifacts["score"] =
      ctx.store.put_json(json::parse(filtering::scored_manifest_line(scored)));
}

using StepFn = void (*)(StepContext&);

const std::map<std::string, StepFn>& step_registry() {
  static const std::map<std::string, StepFn> registry = {
      {"acquire_clip", step_acquire_clip},
      {"caption", step_caption},
      {"detect_objects", step_detect_objects},
      {"local_captions", step_local_captions},
      {"canny_video", step_canny_video},
      {"depth_video", step_depth_video},
      {"record", step_record},
      {"gen_instruction", step_gen_instruction},
      {"select_foreground", step_select_foreground},
      {"edit_frame0", step_edit_frame0},
      {"mask_control", step_mask_control},
      {"controlled_video", step_controlled_video},
      {"inpaint_object", step_inpaint_object},
      {"i2v", step_i2v},
      {"segment_object", step_segment_object},
      {"paste_object", step_paste_object},
      {"gen_texts", step_gen_texts},
      {"gen_shot_prompts", step_gen_shot_prompts},
      {"multi_shot", step_multi_shot},
      {"segment_shots", step_segment_shots},
      {"gen_creative_prompts", step_gen_creative_prompts},
      {"i2v_variants", step_i2v_variants},
      {"make_pairs", step_make_pairs},
      {"judge", step_judge},
      {"score", step_score},
  };
  return registry;
}

}  // namespace

StageJob run_stage(StageJob job, adapters::AdapterSet& adapters, ArtifactStore& store) {
  if (job.status == JobStatus::Done) return job;  // rerun is a no-op
  job.status = JobStatus::Running;
  job.error.clear();
  job.failed_step = -1;
  StepContext ctx{job, adapters, store};
  for (size_t i = 0; i < job.steps.size(); ++i) {
    const StepSpec& step = job.steps[i];
    if (job.artifacts.count(step.name)) continue;  // already produced
    auto it = step_registry().find(step.name);
    if (it == step_registry().end()) {
      job.status = JobStatus::Failed;
      job.failed_step = static_cast<int>(i);
      job.error = "unknown step " + step.name;
      return job;
    }
    try {
      it->second(ctx);
    } catch (const std::exception& e) {
      job.status = JobStatus::Failed;
      job.failed_step = static_cast<int>(i);
      job.error = e.what();
      return job;
    }
  }
  job.status = JobStatus::Done;
  return job;
}

}  // namespace ivedit::pipeline
