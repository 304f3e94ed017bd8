// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic in-process mocks. Every mock is a pure function of
// (request payload, options.seed); media payloads are store refs. The
// generative mocks produce structurally valid stand-ins, never realistic
// imagery: tests assert structure and locality, not aesthetics.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ivedit/adapters/adapters.hpp"
#include "ivedit/adapters/mock_world.hpp"
#include "ivedit/core/errors.hpp"
#include "ivedit/core/io.hpp"
#include "ivedit/core/text.hpp"
#include "ivedit/core/rng.hpp"

using nlohmann::json;

namespace ivedit::adapters {

using core::MaskVideo;
using core::ParameterError;
using core::Rng;
using core::VideoClip;
namespace mw = mockworld;

namespace {

uint64_t option_seed(const json& options) { return options.value("seed", 0ULL); }

float snap8(float v) { return core::dequantize_u8(core::quantize_u8(v)); }

// ---- taxonomy used by the instruction generator -------------------------

const char* kStyles[18] = {
    "Ghibli animation", "oil painting", "watercolor", "cyberpunk neon", "pixel art",
    "ink wash", "comic book", "claymation", "papercraft", "stained glass",
    "charcoal sketch", "impressionist", "low poly 3D", "vaporwave", "film noir",
    "ukiyo-e woodblock", "pop art", "gothic etching"};
const char* kTimesOfDay[4] = {"early morning light", "bright noon sun", "blue hour dusk",
                              "deep night"};
const char* kWeather[3] = {"sunny", "rainy", "snowy"};
const char* kBackgrounds[8] = {
    "a misty pine forest at dawn", "a neon-lit city street at night",
    "a quiet sandy beach under scattered clouds", "a snow-covered mountain pass",
    "a sunflower field in high summer", "an ornate marble palace hall",
    "a rain-soaked cobblestone alley", "a glowing desert canyon at sunset"};
const char* kLocalChanges[8] = {
    "repaint it in glossy crimson", "age it by several decades",
    "turn it into polished chrome", "cover it in blooming moss",
    "make it translucent like frosted glass", "shrink it to half its size",
    "give it a woven wicker texture", "turn it golden and ornate"};
const char* kAddObjects[8] = {
    "a red paper kite", "a small wooden rowboat", "a striped beach umbrella",
    "a vintage street lamp", "a curious orange cat", "a stack of old books",
    "a potted sunflower", "a brass telescope"};
const char* kCreativeActions[8] = {
    "starts to levitate and slowly spins",  "dissolves into a swarm of glowing petals",
    "freezes into sculpted ice",            "multiplies into a marching row of copies",
    "melts into liquid metal and reforms",  "grows to twice its size and casts long shadows",
    "sprouts delicate clockwork wings",     "turns into stained glass lit from within"};

std::string pick(const char* const* list, int n, Rng& rng) {
  return list[rng.next_int(0, n - 1)];
}

json gen_instruction(const Request& req, const json& options) {
  std::string category = req.payload.at("category").get<std::string>();
  uint64_t seed = core::mix64(option_seed(options), req.payload.at("seed").get<uint64_t>());
  const json& ctx = req.payload.at("context");
  std::string mode = ctx.value("mode", "pair");
  Rng rng(core::mix64(seed, core::fnv1a64(category + "/" + mode)));
  json extras = json::object();
  std::string instruction;

  if (category == "GlobalStyle") {
    int variant = static_cast<int>(rng.next_int(0, 24));
    std::string look;
    if (variant < 18) {
      look = std::string(kStyles[variant]) + " style";
    } else if (variant < 22) {
      look = std::string(kTimesOfDay[variant - 18]);
    } else {
      look = std::string(kWeather[variant - 22]) + " weather";
    }
    instruction = "Transform the entire video into " + look +
                  ", keeping every object, camera move, and motion exactly as in the "
                  "original footage while restyling color, texture, and lighting.";
    extras["backward_instruction"] =
        "Restore the original photographic look of the video, removing the " + look + ".";
    extras["image_instruction"] = "Restyle this frame into " + look + ".";
    extras["video_prompt"] = "A video rendered in " + look + ".";
  } else if (category == "BackgroundChange") {
    std::string scene = pick(kBackgrounds, 8, rng);
    instruction = "Replace the background of the video with " + scene +
                  ", leaving the foreground subjects untouched and preserving their "
                  "motion and edges throughout the clip.";
    extras["backward_instruction"] = "Restore the original background of the video.";
    extras["image_instruction"] = "Replace the background of this frame with " + scene + ".";
    extras["video_prompt"] = "The same foreground in front of " + scene + ".";
  } else if (category == "LocalChange") {
    std::string target = ctx.value("local_caption", "the main object");
    std::string change = pick(kLocalChanges, 8, rng);
    instruction = "Edit only " + target + ": " + change +
                  ", while keeping the rest of the scene, the camera, and all motion "
                  "identical to the original video.";
    extras["backward_instruction"] = "Undo the change applied to " + target + ".";
    extras["image_instruction"] = "On this frame, " + change + " for " + target + ".";
    extras["video_prompt"] = "The scene after the local change to " + target + ".";
  } else if (category == "LocalAdd") {
    std::string object = ctx.value("object", "an object");
    instruction = "Add " + object +
                  " into the scene so that it blends with the existing lighting, scale, "
                  "and motion of the video.";
  } else if (category == "LocalRemove") {
    std::string object = ctx.value("object", pick(kAddObjects, 8, rng));
    instruction = "Remove " + object +
                  " from the video and reconstruct the background behind it consistently "
                  "across all frames.";
    extras["object"] = object;
    extras["image_add_instruction"] = "Add " + object + " to this frame.";
  } else if (category == "SubtitlesEdit") {
    // 4-letter words: raster width 23 px at scale 1 fits any frame >= 24 wide
    static const char* words[8] = {"ECHO", "RAIN", "NOVA", "GLOW",
                                   "DUSK", "WAVE", "MIST", "PINE"};
    std::string a = pick(words, 8, rng);
    std::string b = pick(words, 8, rng);
    while (b == a) b = pick(words, 8, rng);
    extras["text_a"] = a;
    extras["text_b"] = b;
    instruction = "Generate subtitle texts for the clip.";
  } else if (category == "CameraMultiShot") {
    std::string subject = ctx.value("subject", "the main subject");
    extras["prompts"] = json::array({"A close-up shot of " + subject + ".",
                                     "A medium shot of " + subject + ".",
                                     "A wide shot of " + subject + " in its surroundings."});
    instruction = "Generate a three-shot sequence of " + subject +
                  " switching between close-up, medium, and wide framing.";
  } else if (category == "CreativeEdit") {
    if (mode == "creative_prompts") {
      int n = ctx.value("n", 3);
      json prompts = json::array();
      for (int i = 0; i < n; ++i) {
        Rng prng(core::mix64(seed, core::mix64(core::fnv1a64("creative"), i)));
        prompts.push_back("The subject " + pick(kCreativeActions, 8, prng) + ".");
      }
      extras["prompts"] = prompts;
      instruction = "Generate creative motion prompts for the first frame.";
    } else {
      std::string from = ctx.value("from", "the first variation");
      std::string to = ctx.value("to", "the second variation");
      instruction = "Reimagine the video so that instead of \"" + from +
                    "\" the subject now does the following: \"" + to +
                    "\", keeping the subject's identity recognizable.";
    }
  } else {
    throw ParameterError("instruction_generate: unknown category " + category);
  }
  return json{{"instruction", instruction}, {"extras", extras}};
}

// ---- media mocks --------------------------------------------------------

json mock_caption(const Request& req, const json& options, pipeline::ArtifactStore& store) {
  VideoClip clip = store.get_clip(req.payload.at("clip").get<std::string>());
  json names = json::array();
  std::string caption;
  if (auto parsed = mw::parse_scene_clip_id(clip.id)) {
    mw::Scene scene = mw::make_scene(parsed->seed, parsed->n_objects, clip.h, clip.w);
    std::ostringstream ss;
    ss << "A slowly drifting gradient backdrop";
    for (const auto& o : scene.objects) {
      ss << ", with " << o.name << " gliding across the frame";
      names.push_back(o.name);
    }
    ss << ". The camera holds steady while the shapes keep constant speed, giving the "
          "clip a calm, diagrammatic look.";
    caption = ss.str();
  } else {
    Rng rng(core::mix64(option_seed(options), core::fnv1a64(clip.id)));
    caption = "A short clip (" + std::to_string(clip.t) + " frames) of an abstract scene, id " +
              clip.id + ", variant " + std::to_string(rng.next_int(100, 999)) + ".";
    names.push_back("the central object");
  }
  return json{{"caption", caption}, {"object_names", names}};
}

json mock_detect_segment(const Request& req, const json&, pipeline::ArtifactStore& store) {
  VideoClip clip = store.get_clip(req.payload.at("clip").get<std::string>());
  json objects = json::array();
  auto add_object = [&](const std::string& name, const MaskVideo& mask,
                        const std::vector<core::Box>& boxes) {
    json jboxes = json::array();
    for (const auto& b : boxes) jboxes.push_back(json::array({b.x0, b.y0, b.x1, b.y1}));
    objects.push_back(
        json{{"name", name}, {"mask", store.put_mask(mask)}, {"boxes", jboxes}});
  };

  size_t addrect = clip.id.find("addrect-");
  if (addrect != std::string::npos) {
    // the image-edit mock painted a rectangle and published its geometry
    int x = 0, y = 0, w = 0, h = 0;
    if (std::sscanf(clip.id.c_str() + addrect, "addrect-x%d-y%d-w%d-h%d", &x, &y, &w, &h) == 4) {
      MaskVideo mask(clip.t, clip.h, clip.w);
      std::vector<core::Box> boxes;
      for (int f = 0; f < clip.t; ++f) {
        for (int yy = y; yy < std::min(clip.h, y + h); ++yy) {
          for (int xx = x; xx < std::min(clip.w, x + w); ++xx) mask.at(f, yy, xx) = 1;
        }
        boxes.push_back({static_cast<float>(x), static_cast<float>(y),
                         static_cast<float>(std::min(clip.w, x + w)),
                         static_cast<float>(std::min(clip.h, y + h))});
      }
      add_object("the added object", mask, boxes);
      return json{{"objects", objects}};
    }
  }
  if (auto parsed = mw::parse_scene_clip_id(clip.id)) {
    mw::Scene scene = mw::make_scene(parsed->seed, parsed->n_objects, clip.h, clip.w);
    std::vector<std::string> wanted;
    if (req.payload.contains("names")) {
      for (const auto& n : req.payload.at("names")) wanted.push_back(n.get<std::string>());
    }
    for (size_t i = 0; i < scene.objects.size(); ++i) {
      const auto& o = scene.objects[i];
      if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), o.name) == wanted.end()) {
        continue;
      }
      std::vector<core::Box> boxes;
      for (int f = 0; f < clip.t; ++f) {
        boxes.push_back(mw::object_box(scene, static_cast<int>(i), f + parsed->frame_offset,
                                       clip.h, clip.w));
      }
      add_object(o.name,
                 mw::object_mask(scene, static_cast<int>(i), clip.t, clip.h, clip.w,
                                 parsed->frame_offset),
                 boxes);
    }
    return json{{"objects", objects}};
  }
  // fallback: a single centered rectangle
  MaskVideo mask(clip.t, clip.h, clip.w);
  std::vector<core::Box> boxes;
  int y0 = clip.h / 3, y1 = 2 * clip.h / 3, x0 = clip.w / 3, x1 = 2 * clip.w / 3;
  for (int f = 0; f < clip.t; ++f) {
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) mask.at(f, y, x) = 1;
    }
    boxes.push_back({static_cast<float>(x0), static_cast<float>(y0), static_cast<float>(x1),
                     static_cast<float>(y1)});
  }
  add_object("the central object", mask, boxes);
  return json{{"objects", objects}};
}

json mock_local_describe(const Request& req, const json& options,
                         pipeline::ArtifactStore& store) {
  (void)store;
  std::string name = req.payload.at("name").get<std::string>();
  Rng rng(core::mix64(option_seed(options), core::fnv1a64(name)));
  static const char* traits[6] = {"matte",      "softly glowing", "sharp-edged",
                                  "translucent", "textured",       "satin-finished"};
  return json{{"caption", name + ", a " + std::string(pick(traits, 6, rng)) +
                              " shape holding a steady course through the frame"}};
}

json mock_depth(const Request& req, const json&, pipeline::ArtifactStore& store) {
  VideoClip clip = store.get_clip(req.payload.at("clip").get<std::string>());
  VideoClip depth(clip.t, clip.h, clip.w, 1, clip.fps, clip.id + "/depth");
  for (int f = 0; f < clip.t; ++f) {
    for (int y = 0; y < clip.h; ++y) {
      for (int x = 0; x < clip.w; ++x) {
        float luma = clip.c == 1 ? clip.at(f, y, x, 0)
                                 : 0.299f * clip.at(f, y, x, 0) + 0.587f * clip.at(f, y, x, 1) +
                                       0.114f * clip.at(f, y, x, 2);
        float vert = clip.h > 1 ? static_cast<float>(y) / (clip.h - 1) : 0.0f;
        depth.at(f, y, x, 0) = snap8(0.6f * vert + 0.4f * luma);
      }
    }
  }
  return json{{"depth", store.put_clip(depth)}};
}

json mock_image_edit(const Request& req, const json& options, pipeline::ArtifactStore& store) {
  VideoClip image = store.get_clip(req.payload.at("image").get<std::string>());
  std::string instruction = req.payload.at("instruction").get<std::string>();
  uint64_t key = core::mix64(option_seed(options), core::fnv1a64(instruction));
  Rng rng(key);
  VideoClip out = image;
  std::string lower = core::to_lower(instruction);
  if (lower.rfind("add ", 0) == 0) {
    // paint a rectangle and publish its geometry through the clip id
    int w = static_cast<int>(rng.next_int(std::max(2, image.w / 8), std::max(3, image.w / 5)));
    int h = static_cast<int>(rng.next_int(std::max(2, image.h / 8), std::max(3, image.h / 5)));
    int x = static_cast<int>(rng.next_int(0, std::max(0, image.w - w)));
    int y = static_cast<int>(rng.next_int(0, std::max(0, image.h - h)));
    float color[3] = {snap8(static_cast<float>(rng.next_double())),
                      snap8(static_cast<float>(rng.next_double())),
                      snap8(static_cast<float>(rng.next_double()))};
    for (int yy = y; yy < y + h; ++yy) {
      for (int xx = x; xx < x + w; ++xx) {
        for (int c = 0; c < out.c; ++c) out.at(0, yy, xx, c) = color[std::min(c, 2)];
      }
    }
    char tag[64];
    std::snprintf(tag, sizeof(tag), "+addrect-x%d-y%d-w%d-h%d", x, y, w, h);
    out.id = image.id + tag;
  } else {
    // global affine channel remap
    float a[3], b[3];
    for (int c = 0; c < 3; ++c) {
      a[c] = 0.5f + 0.5f * static_cast<float>(rng.next_double());
      b[c] = 0.3f * static_cast<float>(rng.next_double());
    }
    for (int yy = 0; yy < out.h; ++yy) {
      for (int xx = 0; xx < out.w; ++xx) {
        for (int c = 0; c < out.c; ++c) {
          float v = a[std::min(c, 2)] * out.at(0, yy, xx, c) + b[std::min(c, 2)];
          out.at(0, yy, xx, c) = snap8(std::clamp(v, 0.0f, 1.0f));
        }
      }
    }
    char tag[32];
    std::snprintf(tag, sizeof(tag), "+edit%08llx",
                  static_cast<unsigned long long>(key & 0xffffffffULL));
    out.id = image.id + tag;
  }
  return json{{"image", store.put_clip(out)}};
}

json mock_controlled_video(const Request& req, const json& options,
                           pipeline::ArtifactStore& store) {
  VideoClip control = store.get_clip(req.payload.at("control").get<std::string>());
  VideoClip frame0 = store.get_clip(req.payload.at("first_frame").get<std::string>());
  std::string prompt = req.payload.at("prompt").get<std::string>();
  if (frame0.h != control.h || frame0.w != control.w) {
    throw ParameterError("controlled_video: frame/control geometry mismatch");
  }
  Rng rng(core::mix64(option_seed(options), core::fnv1a64(prompt)));
  float line[3] = {snap8(0.1f + 0.2f * static_cast<float>(rng.next_double())),
                   snap8(0.1f + 0.2f * static_cast<float>(rng.next_double())),
                   snap8(0.1f + 0.2f * static_cast<float>(rng.next_double()))};
  VideoClip out(control.t, control.h, control.w, frame0.c, control.fps,
                frame0.id + "+ctrl");
  for (int f = 0; f < out.t; ++f) {
    for (int y = 0; y < out.h; ++y) {
      for (int x = 0; x < out.w; ++x) {
        bool edge = control.at(f, y, x, 0) > 0.5f;
        for (int c = 0; c < out.c; ++c) {
          out.at(f, y, x, c) = edge ? line[std::min(c, 2)] : frame0.at(0, y, x, c);
        }
      }
    }
  }
  return json{{"video", store.put_clip(out)}};
}

json mock_i2v(const Request& req, const json&, pipeline::ArtifactStore& store) {
  VideoClip image = store.get_clip(req.payload.at("image").get<std::string>());
  int frames = req.payload.at("frames").get<int>();
  if (frames < 1) throw ParameterError("i2v: frames must be >= 1");
  VideoClip out(frames, image.h, image.w, image.c, image.fps, image.id + "+i2v");
  size_t frame_sz = static_cast<size_t>(image.h) * image.w * image.c;
  for (int f = 0; f < frames; ++f) {
    std::copy(image.data.begin(), image.data.begin() + static_cast<long>(frame_sz),
              out.data.begin() + static_cast<long>(f) * static_cast<long>(frame_sz));
  }
  return json{{"video", store.put_clip(out)}};
}

json mock_inpaint(const Request& req, const json&, pipeline::ArtifactStore& store) {
  VideoClip clip = store.get_clip(req.payload.at("clip").get<std::string>());
  MaskVideo mask = store.get_mask(req.payload.at("mask").get<std::string>());
  if (mask.t != clip.t || mask.h != clip.h || mask.w != clip.w) {
    throw ParameterError("inpaint: mask/clip geometry mismatch");
  }
  // masked neighborhood-mean fill, onion peeling from the mask boundary
  VideoClip out = clip;
  out.id = clip.id + "+inpaint";
  for (int f = 0; f < clip.t; ++f) {
    std::vector<uint8_t> unknown(static_cast<size_t>(clip.h) * clip.w, 0);
    int64_t remaining = 0;
    for (int y = 0; y < clip.h; ++y) {
      for (int x = 0; x < clip.w; ++x) {
        if (mask.at(f, y, x)) {
          unknown[static_cast<size_t>(y) * clip.w + x] = 1;
          ++remaining;
        }
      }
    }
    while (remaining > 0) {
      std::vector<std::pair<int, int>> ready;
      for (int y = 0; y < clip.h; ++y) {
        for (int x = 0; x < clip.w; ++x) {
          if (!unknown[static_cast<size_t>(y) * clip.w + x]) continue;
          bool has_known = false;
          for (int dy = -1; dy <= 1 && !has_known; ++dy) {
            for (int dx = -1; dx <= 1 && !has_known; ++dx) {
              int ny = y + dy, nx = x + dx;
              if (ny < 0 || ny >= clip.h || nx < 0 || nx >= clip.w) continue;
              has_known = !unknown[static_cast<size_t>(ny) * clip.w + nx];
            }
          }
          if (has_known) ready.emplace_back(y, x);
        }
      }
      if (ready.empty()) break;  // fully masked frame: nothing known to pull from
      for (auto [y, x] : ready) {
        for (int c = 0; c < clip.c; ++c) {
          double acc = 0;
          int n = 0;
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              int ny = y + dy, nx = x + dx;
              if (ny < 0 || ny >= clip.h || nx < 0 || nx >= clip.w) continue;
              if (unknown[static_cast<size_t>(ny) * clip.w + nx]) continue;
              acc += out.at(f, ny, nx, c);
              ++n;
            }
          }
          out.at(f, y, x, c) = snap8(static_cast<float>(acc / std::max(n, 1)));
        }
      }
      for (auto [y, x] : ready) {
        unknown[static_cast<size_t>(y) * clip.w + x] = 0;
        --remaining;
      }
    }
  }
  return json{{"video", store.put_clip(out)}};
}

json mock_multi_shot(const Request& req, const json&, pipeline::ArtifactStore& store) {
  VideoClip image = store.get_clip(req.payload.at("image").get<std::string>());
  const json& prompts = req.payload.at("prompts");
  if (!prompts.is_array() || prompts.size() != 3) {
    throw ParameterError("multi_shot_generate: exactly three shot prompts required");
  }
  const int seg = 4;
  VideoClip out(3 * seg, image.h, image.w, image.c, image.fps, image.id + "+multishot");
  auto sample = [&](int shot, int y, int x, int c) -> float {
    if (shot == 0) {
      // close: nearest-neighbor zoom into the center, tonally inverted so
      // the cut against the medium shot always clears the detector threshold
      int sy = image.h / 4 + y / 2, sx = image.w / 4 + x / 2;
      float v = image.at(0, std::min(sy, image.h - 1), std::min(sx, image.w - 1), c);
      return 1.0f - 0.8f * v;
    }
    if (shot == 1) return image.at(0, y, x, c);  // medium: as shot
    // wide: half-size content letterboxed on dark gray
    int sy = (y - image.h / 4) * 2, sx = (x - image.w / 4) * 2;
    if (sy < 0 || sy >= image.h || sx < 0 || sx >= image.w) return 0.15f;
    return image.at(0, sy, sx, c);
  };
  for (int shot = 0; shot < 3; ++shot) {
    for (int f = 0; f < seg; ++f) {
      for (int y = 0; y < image.h; ++y) {
        for (int x = 0; x < image.w; ++x) {
          for (int c = 0; c < image.c; ++c) {
            out.at(shot * seg + f, y, x, c) = snap8(sample(shot, y, x, c));
          }
        }
      }
    }
  }
  return json{{"video", store.put_clip(out)},
              {"shot_order", json::array({"close", "medium", "wide"})}};
}

json mock_judge(const Request& req, const json& options, pipeline::ArtifactStore&) {
  std::string policy = options.value("policy", "hash");
  if (policy == "script") {
    const json& script = options.at("script");
    if (!script.is_array() || script.empty()) {
      throw ParameterError("judge: script policy requires a nonempty script array");
    }
    uint64_t key = core::fnv1a64(req.payload.dump());
    return json{{"raw", script[key % script.size()].get<std::string>()}};
  }
  uint64_t key = core::mix64(option_seed(options),
                             core::fnv1a64(req.payload.at("source").get<std::string>() + "|" +
                                           req.payload.at("edited").get<std::string>()));
  Rng rng(key);
  int compliance, consistency, quality;
  if (policy == "lenient") {
    compliance = static_cast<int>(rng.next_int(3, 5));
    consistency = static_cast<int>(rng.next_int(3, compliance));
    quality = static_cast<int>(rng.next_int(3, compliance));
  } else if (policy == "harsh") {
    compliance = static_cast<int>(rng.next_int(1, 3));
    consistency = static_cast<int>(rng.next_int(1, compliance));
    quality = static_cast<int>(rng.next_int(1, compliance));
  } else {  // hash: unconstrained, may violate the cap rule on purpose
    compliance = static_cast<int>(rng.next_int(1, 5));
    consistency = static_cast<int>(rng.next_int(1, 5));
    quality = static_cast<int>(rng.next_int(1, 5));
  }
  double violation_rate = options.value("cap_violation_rate", 0.0);
  if (violation_rate > 0 && rng.next_double() < violation_rate && compliance < 5) {
    consistency = compliance + 1;
  }
  static const char* notes[4] = {
      "Edit followed the instruction with stable framing.",
      "Edit applied; minor artifacts in fast motion.",
      "Edit mostly clean, slight palette drift.",
      "Edit visible and consistent across frames."};
  std::ostringstream raw;
  raw << "Brief reasoning: " << notes[key % 4] << "\n"
      << "Instruction Compliance: " << compliance << "\n"
      << "Consistency & Detail Fidelity: " << consistency << "\n"
      << "Visual Quality & Stability: " << quality << "\n";
  return json{{"raw", raw.str()}};
}

json mock_edit_model(const Request& req, const json& options, pipeline::ArtifactStore& store) {
  std::string mode = options.value("mode", "identity");
  std::string source_ref = req.payload.at("source").get<std::string>();
  if (mode == "identity") {
    return json{{"video", source_ref}};
  }
  // "tint": deterministic channel shift keyed by the instruction
  VideoClip clip = store.get_clip(source_ref);
  std::string instruction = req.payload.at("instruction").get<std::string>();
  Rng rng(core::mix64(option_seed(options), core::fnv1a64(instruction)));
  float shift[3] = {static_cast<float>(rng.next_double() * 0.2 - 0.1),
                    static_cast<float>(rng.next_double() * 0.2 - 0.1),
                    static_cast<float>(rng.next_double() * 0.2 - 0.1)};
  VideoClip out = clip;
  out.id = clip.id + "+tint";
  for (int f = 0; f < out.t; ++f) {
    for (int y = 0; y < out.h; ++y) {
      for (int x = 0; x < out.w; ++x) {
        for (int c = 0; c < out.c; ++c) {
          out.at(f, y, x, c) =
              snap8(std::clamp(out.at(f, y, x, c) + shift[std::min(c, 2)], 0.0f, 1.0f));
        }
      }
    }
  }
  return json{{"video", store.put_clip(out)}};
}

}  // namespace

Response mock_dispatch(Capability cap, const Request& req, const json& options,
                       pipeline::ArtifactStore& store) {
  json payload;
  switch (cap) {
    case Capability::Caption: payload = mock_caption(req, options, store); break;
    case Capability::DetectSegment: payload = mock_detect_segment(req, options, store); break;
    case Capability::LocalDescribe: payload = mock_local_describe(req, options, store); break;
    case Capability::Depth: payload = mock_depth(req, options, store); break;
    case Capability::ImageEdit: payload = mock_image_edit(req, options, store); break;
    case Capability::ControlledVideo:
      payload = mock_controlled_video(req, options, store);
      break;
    case Capability::I2V: payload = mock_i2v(req, options, store); break;
    case Capability::Inpaint: payload = mock_inpaint(req, options, store); break;
    case Capability::MultiShotGenerate: payload = mock_multi_shot(req, options, store); break;
    case Capability::InstructionGenerate: payload = gen_instruction(req, options); break;
    case Capability::Judge: payload = mock_judge(req, options, store); break;
    case Capability::EditModelUnderTest: payload = mock_edit_model(req, options, store); break;
  }
  return Response{req.id, std::move(payload)};
}

}  // namespace ivedit::adapters
