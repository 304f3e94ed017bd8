// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Native per-clip algorithms used by the data pipeline: clip windowing,
// Canny edges, mask IoU and foreground-subset selection, compositing, and
// threshold shot segmentation.

#pragma once

#include <optional>
#include <vector>

#include "ivedit/core/rng.hpp"
#include "ivedit/core/types.hpp"

namespace ivedit::pipeline {

struct WindowConfig {
  int min_len = 65;
  int max_len = 129;
};

struct Window {
  int start = 0;
  int length = 0;
};

// Uniform length in [min_len, min(max_len, total)], uniform start over the
// valid range. Throws DataError when the source is shorter than min_len.
Window sample_clip_window(int total_frames, core::Rng& rng, const WindowConfig& cfg = {});

core::VideoClip extract_window(const core::VideoClip& clip, const Window& w);

// Canny: luma grayscale, 5-tap Gaussian smoothing, Sobel gradients,
// non-maximum suppression along the quantized gradient direction, and
// two-threshold hysteresis. Output is a binary single-channel clip.
core::VideoClip canny_edges(const core::VideoClip& clip, float low = 0.10f, float high = 0.25f);

// |a AND b| / |a OR b|; defined as 1.0 when both masks are empty.
double mask_iou(const core::MaskFrame& a, const core::MaskFrame& b);

struct MaskSet {
  std::vector<core::MaskFrame> masks;
  std::vector<std::string> names;
};

// The subset of masks whose union has maximal IoU with fg among subsets
// strictly exceeding the threshold; nullopt when none qualifies. Exhaustive
// for N <= 12 masks, greedy by marginal IoU gain beyond that (documented
// approximation). Ties prefer fewer masks, then lexicographically smaller
// index sets.
std::optional<std::vector<int>> select_foreground_subset(const core::MaskFrame& fg,
                                                         const MaskSet& masks,
                                                         double threshold = 0.95);

core::MaskFrame union_masks(const MaskSet& masks, const std::vector<int>& indices);

// donor where mask is set, base elsewhere.
core::VideoClip composite_masked(const core::VideoClip& base, const core::VideoClip& donor,
                                 const core::MaskVideo& mask);

// Keeps control pixels on the foreground, zeroes the background.
core::VideoClip mask_background_of(const core::VideoClip& control,
                                   const core::MaskVideo& fg_mask);

enum class ShotType { Close, Medium, Wide, Unknown };

struct ShotSegment {
  int start = 0;
  int end = 0;  // exclusive
  ShotType type = ShotType::Unknown;
};

std::string_view shot_type_name(ShotType t);

// Places a cut wherever the mean absolute frame difference exceeds the
// threshold. Segments always partition [0, T).
std::vector<ShotSegment> segment_shots(const core::VideoClip& clip, float diff_threshold = 0.1f);

// Grows the mask by one pixel in every direction (8-neighborhood), applied
// `iterations` times. Used to bound edit support in locality checks.
core::MaskVideo dilate_mask(const core::MaskVideo& mask, int iterations = 1);

}  // namespace ivedit::pipeline
