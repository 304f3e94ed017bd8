// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/adapters/mock_world.hpp"

#include <algorithm>
#include <charconv>

#include "ivedit/core/io.hpp"
#include "ivedit/core/rng.hpp"

namespace ivedit::adapters::mockworld {

namespace {

struct Palette {
  const char* name;
  std::array<float, 3> color;
};

const Palette kPalette[] = {
    {"crimson", {0.86f, 0.08f, 0.24f}}, {"teal", {0.0f, 0.5f, 0.5f}},
    {"amber", {1.0f, 0.75f, 0.0f}},     {"violet", {0.54f, 0.17f, 0.89f}},
    {"lime", {0.2f, 0.8f, 0.2f}},       {"cobalt", {0.0f, 0.28f, 0.67f}},
    {"coral", {1.0f, 0.5f, 0.31f}},     {"slate", {0.44f, 0.5f, 0.56f}},
};

const char* kShapes[] = {"block", "disc", "card", "tile"};

std::array<float, 3> snap(std::array<float, 3> c) {
  for (auto& v : c) v = core::dequantize_u8(core::quantize_u8(v));
  return c;
}

}  // namespace

Scene make_scene(uint64_t seed, int n_objects, int height, int width) {
  core::Rng rng(core::mix64(seed, core::fnv1a64("scene")));
  Scene s;
  s.seed = seed;
  int bg = static_cast<int>(rng.next_int(0, 7));
  s.bg_top = snap({0.06f * (bg + 1), 0.08f * (bg + 1), 0.10f * (bg + 1)});
  s.bg_bottom = snap({0.9f - 0.05f * bg, 0.85f - 0.04f * bg, 0.8f - 0.03f * bg});
  for (int i = 0; i < n_objects; ++i) {
    SceneObject o;
    int pi = static_cast<int>(rng.next_int(0, 7));
    o.color = snap(kPalette[pi].color);
    o.name = std::string("the ") + kPalette[pi].name + " " +
             kShapes[rng.next_int(0, 3)];
    o.w = static_cast<int>(rng.next_int(std::max(2, width / 8), std::max(3, width / 4)));
    o.h = static_cast<int>(rng.next_int(std::max(2, height / 8), std::max(3, height / 4)));
    o.x = static_cast<int>(rng.next_int(0, std::max(0, width - o.w)));
    o.y = static_cast<int>(rng.next_int(0, std::max(0, height - o.h)));
    o.dx = static_cast<int>(rng.next_int(-1, 1));
    o.dy = static_cast<int>(rng.next_int(-1, 1));
    s.objects.push_back(std::move(o));
  }
  return s;
}

std::string scene_clip_id(uint64_t seed, int n_objects, int frame_offset) {
  return "scene-" + std::to_string(seed) + "-" + std::to_string(n_objects) + "-o" +
         std::to_string(frame_offset);
}

std::optional<SceneClipKey> parse_scene_clip_id(std::string_view id) {
  if (!id.starts_with("scene-")) return std::nullopt;
  std::string_view rest = id.substr(6);
  size_t dash = rest.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  SceneClipKey key;
  auto r1 = std::from_chars(rest.data(), rest.data() + dash, key.seed);
  std::string_view tail = rest.substr(dash + 1);
  size_t end = tail.find_first_not_of("0123456789");
  if (end == std::string_view::npos) end = tail.size();
  auto r2 = std::from_chars(tail.data(), tail.data() + end, key.n_objects);
  if (r1.ec != std::errc{} || r2.ec != std::errc{} || end == 0) return std::nullopt;
  // optional "-o<offset>"; tolerate suffixes appended by later stages
  std::string_view after = tail.substr(end);
  if (after.starts_with("-o")) {
    std::string_view off = after.substr(2);
    size_t oend = off.find_first_not_of("0123456789");
    if (oend == std::string_view::npos) oend = off.size();
    if (oend > 0) std::from_chars(off.data(), off.data() + oend, key.frame_offset);
  }
  return key;
}

core::VideoClip render_scene(const Scene& scene, int t, int h, int w, float fps,
                             int frame_offset) {
  core::VideoClip clip(
      t, h, w, 3, fps,
      scene_clip_id(scene.seed, static_cast<int>(scene.objects.size()), frame_offset));
  for (int fi = 0; fi < t; ++fi) {
    int scene_frame = fi + frame_offset;
    for (int y = 0; y < h; ++y) {
      float a = h > 1 ? static_cast<float>(y) / (h - 1) : 0.0f;
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < 3; ++c) {
          float v = (1 - a) * scene.bg_top[static_cast<size_t>(c)] +
                    a * scene.bg_bottom[static_cast<size_t>(c)];
          clip.at(fi, y, x, c) = core::dequantize_u8(core::quantize_u8(v));
        }
      }
    }
    for (size_t i = 0; i < scene.objects.size(); ++i) {
      core::Box b = object_box(scene, static_cast<int>(i), scene_frame, h, w);
      const auto& o = scene.objects[i];
      for (int y = static_cast<int>(b.y0); y < static_cast<int>(b.y1); ++y) {
        for (int x = static_cast<int>(b.x0); x < static_cast<int>(b.x1); ++x) {
          for (int c = 0; c < 3; ++c) clip.at(fi, y, x, c) = o.color[static_cast<size_t>(c)];
        }
      }
    }
  }
  return clip;
}

core::Box object_box(const Scene& scene, int idx, int frame, int h, int w) {
  const auto& o = scene.objects.at(static_cast<size_t>(idx));
  int x = std::clamp(o.x + o.dx * frame, 0, std::max(0, w - o.w));
  int y = std::clamp(o.y + o.dy * frame, 0, std::max(0, h - o.h));
  return {static_cast<float>(x), static_cast<float>(y), static_cast<float>(x + o.w),
          static_cast<float>(y + o.h)};
}

core::MaskVideo object_mask(const Scene& scene, int idx, int t, int h, int w,
                            int frame_offset) {
  core::MaskVideo m(t, h, w);
  for (int f = 0; f < t; ++f) {
    core::Box b = object_box(scene, idx, f + frame_offset, h, w);
    for (int y = static_cast<int>(b.y0); y < static_cast<int>(b.y1); ++y) {
      for (int x = static_cast<int>(b.x0); x < static_cast<int>(b.x1); ++x) {
        m.at(f, y, x) = 1;
      }
    }
  }
  return m;
}

std::string object_phrase(const SceneObject& obj) { return obj.name; }

}  // namespace ivedit::adapters::mockworld
