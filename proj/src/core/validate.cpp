// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/core/validate.hpp"

#include <cmath>

namespace ivedit::core {

std::vector<Violation> validate_clip(const VideoClip& clip, const std::string& prefix) {
  std::vector<Violation> out;
  auto bad = [&](const std::string& field, const std::string& rule, const std::string& msg) {
    out.push_back({prefix + "." + field, rule, msg});
  };
  if (clip.t < 1) bad("frames", "min-frames", "T must be >= 1");
  if (clip.h < 4 || clip.w < 4) bad("frames", "min-extent", "H and W must be >= 4");
  if (clip.c != 1 && clip.c != 3) bad("frames", "channel-count", "C must be 1 or 3");
  size_t expect = static_cast<size_t>(std::max(clip.t, 0)) * std::max(clip.h, 0) *
                  std::max(clip.w, 0) * std::max(clip.c, 0);
  if (clip.data.size() != expect) {
    bad("frames", "buffer-size", "frame buffer does not match declared shape");
  } else {
    for (float v : clip.data) {
      if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
        bad("frames", "value-range", "pixel values must be finite and in [0,1]");
        break;
      }
    }
  }
  return out;
}

std::vector<Violation> validate_pair(const EditPair& pair) {
  std::vector<Violation> out;
  auto src = validate_clip(pair.source, "source");
  auto tgt = validate_clip(pair.target, "target");
  out.insert(out.end(), src.begin(), src.end());
  out.insert(out.end(), tgt.begin(), tgt.end());
  if (pair.instruction.empty()) {
    out.push_back({"instruction", "empty-instruction", "instruction must be nonempty"});
  }
  if (spatially_aligned(pair.category)) {
    if (pair.source.t != pair.target.t || pair.source.h != pair.target.h ||
        pair.source.w != pair.target.w) {
      out.push_back({"target.frames", "shape-mismatch",
                     "spatially aligned pair requires identical T x H x W"});
    }
  }
  return out;
}

}  // namespace ivedit::core
