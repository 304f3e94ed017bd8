// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/pipeline/ops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ivedit/core/errors.hpp"

namespace ivedit::pipeline {

using core::DataError;
using core::MaskFrame;
using core::MaskVideo;
using core::ParameterError;
using core::VideoClip;

Window sample_clip_window(int total_frames, core::Rng& rng, const WindowConfig& cfg) {
  if (cfg.min_len < 1 || cfg.max_len < cfg.min_len) {
    throw ParameterError("sample_clip_window: bad window bounds");
  }
  if (total_frames < cfg.min_len) {
    throw DataError("sample_clip_window: source too short (" + std::to_string(total_frames) +
                    " < " + std::to_string(cfg.min_len) + ")");
  }
  int hi = std::min(cfg.max_len, total_frames);
  Window w;
  w.length = static_cast<int>(rng.next_int(cfg.min_len, hi));
  w.start = static_cast<int>(rng.next_int(0, total_frames - w.length));
  return w;
}

VideoClip extract_window(const VideoClip& clip, const Window& w) {
  if (w.start < 0 || w.length < 1 || w.start + w.length > clip.t) {
    throw ParameterError("extract_window: window out of range");
  }
  VideoClip out(w.length, clip.h, clip.w, clip.c, clip.fps, clip.id + "[" +
                std::to_string(w.start) + ":" + std::to_string(w.start + w.length) + "]");
  size_t frame_sz = static_cast<size_t>(clip.h) * clip.w * clip.c;
  std::copy(clip.data.begin() + static_cast<long>(w.start * frame_sz),
            clip.data.begin() + static_cast<long>((w.start + w.length) * frame_sz),
            out.data.begin());
  return out;
}

namespace {

std::vector<float> to_gray(const VideoClip& clip, int frame) {
  std::vector<float> g(static_cast<size_t>(clip.h) * clip.w);
  for (int y = 0; y < clip.h; ++y) {
    for (int x = 0; x < clip.w; ++x) {
      if (clip.c == 1) {
        g[static_cast<size_t>(y) * clip.w + x] = clip.at(frame, y, x, 0);
      } else {
        g[static_cast<size_t>(y) * clip.w + x] = 0.299f * clip.at(frame, y, x, 0) +
                                                 0.587f * clip.at(frame, y, x, 1) +
                                                 0.114f * clip.at(frame, y, x, 2);
      }
    }
  }
  return g;
}

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

std::vector<float> gaussian5(const std::vector<float>& in, int h, int w) {
  // sigma = 1.0, 5 taps
  static const double raw[5] = {std::exp(-2.0), std::exp(-0.5), 1.0, std::exp(-0.5),
                                std::exp(-2.0)};
  double norm = raw[0] + raw[1] + raw[2] + raw[3] + raw[4];
  float k[5];
  for (int i = 0; i < 5; ++i) k[i] = static_cast<float>(raw[i] / norm);
  std::vector<float> tmp(in.size()), out(in.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int i = -2; i <= 2; ++i) {
        acc += k[i + 2] * in[static_cast<size_t>(y) * w + clampi(x + i, 0, w - 1)];
      }
      tmp[static_cast<size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int i = -2; i <= 2; ++i) {
        acc += k[i + 2] * tmp[static_cast<size_t>(clampi(y + i, 0, h - 1)) * w + x];
      }
      out[static_cast<size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

}  // namespace

VideoClip canny_edges(const VideoClip& clip, float low, float high) {
  if (low < 0 || low > high) throw ParameterError("canny_edges: require 0 <= low <= high");
  VideoClip out(clip.t, clip.h, clip.w, 1, clip.fps, clip.id + "/canny");
  const int h = clip.h, w = clip.w;
  for (int f = 0; f < clip.t; ++f) {
    auto gray = gaussian5(to_gray(clip, f), h, w);
    std::vector<float> mag(gray.size(), 0.0f);
    std::vector<uint8_t> dir(gray.size(), 0);
    auto g = [&](int y, int x) {
      return gray[static_cast<size_t>(clampi(y, 0, h - 1)) * w + clampi(x, 0, w - 1)];
    };
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        float gx = (g(y - 1, x + 1) + 2 * g(y, x + 1) + g(y + 1, x + 1)) -
                   (g(y - 1, x - 1) + 2 * g(y, x - 1) + g(y + 1, x - 1));
        float gy = (g(y + 1, x - 1) + 2 * g(y + 1, x) + g(y + 1, x + 1)) -
                   (g(y - 1, x - 1) + 2 * g(y - 1, x) + g(y - 1, x + 1));
        float m = std::sqrt(gx * gx + gy * gy);
        mag[static_cast<size_t>(y) * w + x] = m;
        // quantize direction into 4 sectors: 0 = E/W, 1 = NE/SW, 2 = N/S, 3 = NW/SE
        double angle = std::atan2(gy, gx);
        if (angle < 0) angle += 3.14159265358979323846;
        int sector = static_cast<int>(std::floor((angle + 3.14159265358979323846 / 8) /
                                                 (3.14159265358979323846 / 4))) %
                     4;
        dir[static_cast<size_t>(y) * w + x] = static_cast<uint8_t>(sector);
      }
    }
    // non-maximum suppression along the gradient direction
    std::vector<uint8_t> state(gray.size(), 0);  // 0 none, 1 weak, 2 strong
    auto m_at = [&](int y, int x) -> float {
      if (y < 0 || y >= h || x < 0 || x >= w) return 0.0f;
      return mag[static_cast<size_t>(y) * w + x];
    };
    static const int offs[4][2] = {{0, 1}, {-1, 1}, {-1, 0}, {-1, -1}};  // (dy, dx)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        float m = mag[static_cast<size_t>(y) * w + x];
        if (m < low) continue;
        int s = dir[static_cast<size_t>(y) * w + x];
        float m1 = m_at(y + offs[s][0], x + offs[s][1]);
        float m2 = m_at(y - offs[s][0], x - offs[s][1]);
        if (m >= m1 && m >= m2) {
          state[static_cast<size_t>(y) * w + x] = m >= high ? 2 : 1;
        }
      }
    }
    // hysteresis from strong seeds through weak pixels (8-connected)
    std::deque<std::pair<int, int>> queue;
    std::vector<uint8_t> keep(gray.size(), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (state[static_cast<size_t>(y) * w + x] == 2) {
          keep[static_cast<size_t>(y) * w + x] = 1;
          queue.emplace_back(y, x);
        }
      }
    }
    while (!queue.empty()) {
      auto [y, x] = queue.front();
      queue.pop_front();
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          int ny = y + dy, nx = x + dx;
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          size_t idx = static_cast<size_t>(ny) * w + nx;
          if (state[idx] == 1 && !keep[idx]) {
            keep[idx] = 1;
            queue.emplace_back(ny, nx);
          }
        }
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out.at(f, y, x, 0) = keep[static_cast<size_t>(y) * w + x] ? 1.0f : 0.0f;
      }
    }
  }
  return out;
}

double mask_iou(const MaskFrame& a, const MaskFrame& b) {
  if (a.h != b.h || a.w != b.w) throw ParameterError("mask_iou: shape mismatch");
  int64_t inter = 0, uni = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    bool av = a.data[i] != 0, bv = b.data[i] != 0;
    inter += av && bv;
    uni += av || bv;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MaskFrame union_masks(const MaskSet& masks, const std::vector<int>& indices) {
  if (masks.masks.empty()) throw ParameterError("union_masks: empty mask set");
  MaskFrame out(masks.masks[0].h, masks.masks[0].w);
  for (int idx : indices) {
    const MaskFrame& m = masks.masks.at(static_cast<size_t>(idx));
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] |= m.data[i];
  }
  return out;
}

namespace {

// (intersection, union) of fg against a subset union represented as bytes.
std::pair<int64_t, int64_t> overlap(const MaskFrame& fg, const std::vector<uint8_t>& u) {
  int64_t inter = 0, uni = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    bool av = fg.data[i] != 0, bv = u[i] != 0;
    inter += av && bv;
    uni += av || bv;
  }
  return {inter, uni};
}

// IoU comparison on exact integer counts: a > b?
bool iou_greater(std::pair<int64_t, int64_t> a, std::pair<int64_t, int64_t> b) {
  double ia = a.second == 0 ? 1.0 : static_cast<double>(a.first) / a.second;
  double ib = b.second == 0 ? 1.0 : static_cast<double>(b.first) / b.second;
  return ia > ib;
}

bool iou_equal(std::pair<int64_t, int64_t> a, std::pair<int64_t, int64_t> b) {
  double ia = a.second == 0 ? 1.0 : static_cast<double>(a.first) / a.second;
  double ib = b.second == 0 ? 1.0 : static_cast<double>(b.first) / b.second;
  return ia == ib;
}

std::vector<int> bits_to_indices(uint32_t bits) {
  std::vector<int> out;
  for (int i = 0; bits; ++i, bits >>= 1) {
    if (bits & 1u) out.push_back(i);
  }
  return out;
}

}  // namespace

std::optional<std::vector<int>> select_foreground_subset(const MaskFrame& fg,
                                                         const MaskSet& masks,
                                                         double threshold) {
  if (threshold <= 0.0 || threshold > 1.0) {
    throw ParameterError("select_foreground_subset: threshold must be in (0, 1]");
  }
  int n = static_cast<int>(masks.masks.size());
  if (n == 0) return std::nullopt;
  for (const auto& m : masks.masks) {
    if (m.h != fg.h || m.w != fg.w) {
      throw ParameterError("select_foreground_subset: mask shape mismatch");
    }
  }

  auto iou_of = [&](const std::vector<uint8_t>& u) {
    auto [inter, uni] = overlap(fg, u);
    return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
  };

  if (n <= 12) {
    // exhaustive over all 2^N - 1 nonempty subsets
    std::optional<std::vector<int>> best;
    std::pair<int64_t, int64_t> best_counts{0, 0};
    for (uint32_t bits = 1; bits < (1u << n); ++bits) {
      std::vector<uint8_t> u(fg.data.size(), 0);
      for (int i = 0; i < n; ++i) {
        if (bits & (1u << i)) {
          for (size_t j = 0; j < u.size(); ++j) u[j] |= masks.masks[i].data[j];
        }
      }
      auto counts = overlap(fg, u);
      double iou = counts.second == 0 ? 1.0 : static_cast<double>(counts.first) / counts.second;
      if (iou <= threshold) continue;
      auto indices = bits_to_indices(bits);
      if (!best || iou_greater(counts, best_counts) ||
          (iou_equal(counts, best_counts) &&
           (indices.size() < best->size() ||
            (indices.size() == best->size() && indices < *best)))) {
        best = indices;
        best_counts = counts;
      }
    }
    return best;
  }

  // Greedy by marginal IoU gain for large N; keeps the best prefix seen.
  std::vector<uint8_t> u(fg.data.size(), 0);
  std::vector<int> chosen;
  std::vector<bool> used(static_cast<size_t>(n), false);
  std::optional<std::vector<int>> best;
  double best_iou = threshold;
  double current = 0.0;
  for (int round = 0; round < n; ++round) {
    int arg = -1;
    double arg_iou = current;
    for (int i = 0; i < n; ++i) {
      if (used[static_cast<size_t>(i)]) continue;
      std::vector<uint8_t> trial = u;
      for (size_t j = 0; j < trial.size(); ++j) trial[j] |= masks.masks[i].data[j];
      double iou = iou_of(trial);
      if (iou > arg_iou) {
        arg_iou = iou;
        arg = i;
      }
    }
    if (arg < 0) break;
    used[static_cast<size_t>(arg)] = true;
    chosen.push_back(arg);
    for (size_t j = 0; j < u.size(); ++j) u[j] |= masks.masks[arg].data[j];
    current = arg_iou;
    if (current > best_iou) {
      best_iou = current;
      std::vector<int> sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      best = sorted;
    }
  }
  return best;
}

VideoClip composite_masked(const VideoClip& base, const VideoClip& donor,
                           const MaskVideo& mask) {
  if (!base.same_geometry(donor) || base.t != mask.t || base.h != mask.h || base.w != mask.w) {
    throw ParameterError("composite_masked: geometry mismatch");
  }
  VideoClip out = base;
  for (int f = 0; f < base.t; ++f) {
    for (int y = 0; y < base.h; ++y) {
      for (int x = 0; x < base.w; ++x) {
        if (mask.at(f, y, x)) {
          for (int c = 0; c < base.c; ++c) out.at(f, y, x, c) = donor.at(f, y, x, c);
        }
      }
    }
  }
  return out;
}

VideoClip mask_background_of(const VideoClip& control, const MaskVideo& fg_mask) {
  if (control.t != fg_mask.t || control.h != fg_mask.h || control.w != fg_mask.w) {
    throw ParameterError("mask_background_of: geometry mismatch");
  }
  VideoClip out = control;
  for (int f = 0; f < control.t; ++f) {
    for (int y = 0; y < control.h; ++y) {
      for (int x = 0; x < control.w; ++x) {
        if (!fg_mask.at(f, y, x)) {
          for (int c = 0; c < control.c; ++c) out.at(f, y, x, c) = 0.0f;
        }
      }
    }
  }
  return out;
}

std::string_view shot_type_name(ShotType t) {
  switch (t) {
    case ShotType::Close: return "close";
    case ShotType::Medium: return "medium";
    case ShotType::Wide: return "wide";
    case ShotType::Unknown: return "unknown";
  }
  return "?";
}

std::vector<ShotSegment> segment_shots(const VideoClip& clip, float diff_threshold) {
  if (clip.t < 2) throw ParameterError("segment_shots: need at least two frames");
  std::vector<ShotSegment> segments;
  int start = 0;
  size_t frame_sz = static_cast<size_t>(clip.h) * clip.w * clip.c;
  for (int f = 1; f < clip.t; ++f) {
    double acc = 0.0;
    const float* prev = clip.data.data() + (f - 1) * frame_sz;
    const float* cur = clip.data.data() + f * frame_sz;
    for (size_t i = 0; i < frame_sz; ++i) acc += std::fabs(cur[i] - prev[i]);
    if (acc / static_cast<double>(frame_sz) > diff_threshold) {
      segments.push_back({start, f, ShotType::Unknown});
      start = f;
    }
  }
  segments.push_back({start, clip.t, ShotType::Unknown});
  return segments;
}

MaskVideo dilate_mask(const MaskVideo& mask, int iterations) {
  MaskVideo cur = mask;
  for (int it = 0; it < iterations; ++it) {
    MaskVideo next = cur;
    for (int f = 0; f < cur.t; ++f) {
      for (int y = 0; y < cur.h; ++y) {
        for (int x = 0; x < cur.w; ++x) {
          if (cur.at(f, y, x)) continue;
          bool any = false;
          for (int dy = -1; dy <= 1 && !any; ++dy) {
            for (int dx = -1; dx <= 1 && !any; ++dx) {
              int ny = y + dy, nx = x + dx;
              if (ny < 0 || ny >= cur.h || nx < 0 || nx >= cur.w) continue;
              any = cur.at(f, ny, nx) != 0;
            }
          }
          if (any) next.at(f, y, x) = 1;
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace ivedit::pipeline
