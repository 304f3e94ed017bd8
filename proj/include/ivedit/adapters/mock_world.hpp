// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Procedural scenes backing the desk-scale mocks: a gradient background and
// a few moving colored rectangles. Scenes are keyed by a seed embedded in
// the clip id, so detection/segmentation mocks can recover exactly the
// geometry the synthesizer used and edit-locality invariants stay literally
// checkable.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ivedit/core/types.hpp"

namespace ivedit::adapters::mockworld {

struct SceneObject {
  std::string name;
  std::array<float, 3> color{};
  // frame-0 rectangle and per-frame motion, pixel units
  int x = 0, y = 0, w = 0, h = 0;
  int dx = 0, dy = 0;
};

struct Scene {
  uint64_t seed = 0;
  std::array<float, 3> bg_top{};
  std::array<float, 3> bg_bottom{};
  std::vector<SceneObject> objects;
};

Scene make_scene(uint64_t seed, int n_objects, int height, int width);

struct SceneClipKey {
  uint64_t seed = 0;
  int n_objects = 0;
  int frame_offset = 0;  // first rendered frame within the scene's timeline
};

// Clip id encodes the scene seed, object count, and frame offset:
// "scene-<seed>-<n>-o<offset>".
std::string scene_clip_id(uint64_t seed, int n_objects, int frame_offset);
std::optional<SceneClipKey> parse_scene_clip_id(std::string_view id);

core::VideoClip render_scene(const Scene& scene, int t, int h, int w, float fps,
                             int frame_offset = 0);

// Rectangle of object `idx` at scene frame (frame + offset), clamped.
core::Box object_box(const Scene& scene, int idx, int frame, int h, int w);
core::MaskVideo object_mask(const Scene& scene, int idx, int t, int h, int w,
                            int frame_offset = 0);

// A scene-seeded readable phrase such as "the crimson block".
std::string object_phrase(const SceneObject& obj);

}  // namespace ivedit::adapters::mockworld
