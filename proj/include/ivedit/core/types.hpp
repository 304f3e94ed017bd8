// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Domain value types shared by every module. All types are immutable value
// objects after construction and safe to share across workers.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ivedit::core {

// Dense T x H x W x C video, pixel values normalized to [0,1].
struct VideoClip {
  int t = 0;
  int h = 0;
  int w = 0;
  int c = 0;
  std::vector<float> data;  // row-major t,h,w,c
  float fps = 8.0f;
  std::string id;

  VideoClip() = default;
  VideoClip(int t_, int h_, int w_, int c_, float fps_ = 8.0f, std::string id_ = {})
      : t(t_), h(h_), w(w_), c(c_),
        data(static_cast<size_t>(t_) * h_ * w_ * c_, 0.0f),
        fps(fps_), id(std::move(id_)) {}

  size_t size() const { return data.size(); }
  size_t index(int f, int y, int x, int ch) const {
    return ((static_cast<size_t>(f) * h + y) * w + x) * c + ch;
  }
  float& at(int f, int y, int x, int ch) { return data[index(f, y, x, ch)]; }
  float at(int f, int y, int x, int ch) const { return data[index(f, y, x, ch)]; }
  bool same_geometry(const VideoClip& o) const {
    return t == o.t && h == o.h && w == o.w && c == o.c;
  }
};

// Boolean mask per frame, T x H x W.
struct MaskVideo {
  int t = 0;
  int h = 0;
  int w = 0;
  std::vector<uint8_t> data;

  MaskVideo() = default;
  MaskVideo(int t_, int h_, int w_)
      : t(t_), h(h_), w(w_), data(static_cast<size_t>(t_) * h_ * w_, 0) {}

  size_t index(int f, int y, int x) const {
    return (static_cast<size_t>(f) * h + y) * w + x;
  }
  uint8_t& at(int f, int y, int x) { return data[index(f, y, x)]; }
  uint8_t at(int f, int y, int x) const { return data[index(f, y, x)]; }
  int64_t count() const;
};

// Single-frame boolean mask, H x W.
struct MaskFrame {
  int h = 0;
  int w = 0;
  std::vector<uint8_t> data;

  MaskFrame() = default;
  MaskFrame(int h_, int w_) : h(h_), w(w_), data(static_cast<size_t>(h_) * w_, 0) {}

  uint8_t& at(int y, int x) { return data[static_cast<size_t>(y) * w + x]; }
  uint8_t at(int y, int x) const { return data[static_cast<size_t>(y) * w + x]; }
  int64_t count() const;
};

// Latent encoding of a clip, t x h x w x c_lat.
struct LatentVideo {
  int t = 0;
  int h = 0;
  int w = 0;
  int c = 0;
  std::vector<double> data;

  LatentVideo() = default;
  LatentVideo(int t_, int h_, int w_, int c_)
      : t(t_), h(h_), w(w_), c(c_),
        data(static_cast<size_t>(t_) * h_ * w_ * c_, 0.0) {}

  size_t index(int f, int y, int x, int ch) const {
    return ((static_cast<size_t>(f) * h + y) * w + x) * c + ch;
  }
  double& at(int f, int y, int x, int ch) { return data[index(f, y, x, ch)]; }
  double at(int f, int y, int x, int ch) const { return data[index(f, y, x, ch)]; }
  bool same_geometry(const LatentVideo& o) const {
    return t == o.t && h == o.h && w == o.w && c == o.c;
  }
};

// Token sequence with a prefix mask marking system/template tokens.
struct InstructionEmbedding {
  int len = 0;
  int dim = 0;
  std::vector<double> tokens;      // len x dim row-major
  std::vector<uint8_t> is_prefix;  // length len

  InstructionEmbedding() = default;
  InstructionEmbedding(int len_, int dim_)
      : len(len_), dim(dim_),
        tokens(static_cast<size_t>(len_) * dim_, 0.0),
        is_prefix(len_, 0) {}

  double& at(int i, int j) { return tokens[static_cast<size_t>(i) * dim + j]; }
  double at(int i, int j) const { return tokens[static_cast<size_t>(i) * dim + j]; }
};

// The eight edit categories. The first six are spatially aligned (SA),
// the last two are not (NSA).
enum class Category {
  GlobalStyle = 0,
  BackgroundChange,
  LocalChange,
  LocalRemove,
  LocalAdd,
  SubtitlesEdit,
  CameraMultiShot,
  CreativeEdit,
};

inline constexpr int kCategoryCount = 8;

const std::array<Category, kCategoryCount>& all_categories();
bool spatially_aligned(Category c);
// Canonical identifier used in manifests and on the CLI, e.g. "GlobalStyle".
std::string_view category_name(Category c);
// Human-readable label used in result tables, e.g. "Global Style".
std::string_view category_label(Category c);
std::optional<Category> parse_category(std::string_view name);

struct Box {
  float x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct ObjectEntry {
  std::string name;
  std::vector<Box> boxes;  // one per frame, pixel coordinates
  MaskVideo mask_video;
  std::string local_caption;
};

// Stage-1 product: clip plus everything later stages need.
struct ClipRecord {
  VideoClip clip;
  std::string caption;
  std::vector<ObjectEntry> objects;
  VideoClip edge_video;  // single channel
  std::optional<VideoClip> depth_video;
};

struct EditPair {
  VideoClip source;
  VideoClip target;
  Category category = Category::GlobalStyle;
  std::string instruction;
  std::optional<std::string> backward_instruction;
  std::string id;
};

// Judge output after parsing; cap enforcement clamps and flags.
struct ScoreTriple {
  int compliance = 1;   // 1..5
  int consistency = 1;  // 1..5
  int quality = 1;      // 1..5
  std::string reasoning;
  bool cap_violated = false;
};

}  // namespace ivedit::core
