// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ivedit/core/errors.hpp"
#include "ivedit/core/io.hpp"
#include "ivedit/core/validate.hpp"
#include "ivedit/pipeline/builders.hpp"
#include "ivedit/pipeline/ops.hpp"
#include "ivedit/pipeline/subtitles.hpp"

using namespace ivedit;
using namespace ivedit::pipeline;
using core::MaskFrame;
using core::MaskVideo;
using core::VideoClip;

namespace {

VideoClip solid(int t, int h, int w, int c, float v, std::string id = "clip") {
  VideoClip clip(t, h, w, c, 8.0f, std::move(id));
  for (auto& p : clip.data) p = v;
  return clip;
}

VideoClip random_clip(int t, int h, int w, int c, uint64_t seed, std::string id = "rand") {
  VideoClip clip(t, h, w, c, 8.0f, std::move(id));
  core::Rng rng(seed);
  for (auto& p : clip.data) p = static_cast<float>(rng.next_int(0, 255)) / 255.0f;
  return clip;
}

// Brute-force oracle: enumerate every nonempty subset, keep those with union
// IoU strictly above the threshold, maximize IoU with the same tie rules
// (fewer masks, then lexicographically smaller index set).
std::optional<std::vector<int>> subset_oracle(const MaskFrame& fg, const MaskSet& ms,
                                              double thr) {
  int n = static_cast<int>(ms.masks.size());
  std::optional<std::vector<int>> best;
  double best_iou = -1;
  for (uint32_t bits = 1; bits < (1u << n); ++bits) {
    MaskFrame u(fg.h, fg.w);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (bits & (1u << i)) {
        idx.push_back(i);
        for (size_t j = 0; j < u.data.size(); ++j) u.data[j] |= ms.masks[i].data[j];
      }
    }
    double iou = mask_iou(fg, u);
    if (iou <= thr) continue;
    bool better = false;
    if (!best) {
      better = true;
    } else if (iou > best_iou) {
      better = true;
    } else if (iou == best_iou) {
      if (idx.size() < best->size() || (idx.size() == best->size() && idx < *best)) {
        better = true;
      }
    }
    if (better) {
      best = idx;
      best_iou = iou;
    }
  }
  return best;
}

MaskFrame random_mask(int h, int w, core::Rng& rng, double density) {
  MaskFrame m(h, w);
  for (auto& v : m.data) v = rng.next_double() < density ? 1 : 0;
  return m;
}

}  // namespace

TEST_CASE("sample_clip_window: forced, bounded, deterministic") {
  core::Rng rng(3);
  auto w = sample_clip_window(129, rng, {129, 129});
  CHECK(w.start == 0);
  CHECK(w.length == 129);

  core::Rng r2(17);
  std::set<int> lengths;
  bool saw_min = false, saw_max = false;
  for (int i = 0; i < 10000; ++i) {
    auto win = sample_clip_window(500, r2);
    CHECK(win.length >= 65);
    CHECK(win.length <= 129);
    CHECK(win.start >= 0);
    CHECK(win.start + win.length <= 500);
    lengths.insert(win.length);
    saw_min = saw_min || win.length == 65;
    saw_max = saw_max || win.length == 129;
  }
  CHECK(saw_min);
  CHECK(saw_max);

  core::Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    auto wa = sample_clip_window(300, a);
    auto wb = sample_clip_window(300, b);
    CHECK(wa.start == wb.start);
    CHECK(wa.length == wb.length);
  }
  core::Rng r3(1);
  CHECK_THROWS_AS(sample_clip_window(64, r3), core::DataError);
}

TEST_CASE("canny: constant frame has no edges, output is binary") {
  auto clip = solid(3, 16, 16, 3, 0.42f);
  auto edges = canny_edges(clip);
  CHECK(edges.c == 1);
  CHECK(edges.t == clip.t);
  for (float v : edges.data) CHECK(v == 0.0f);

  auto noisy = random_clip(2, 16, 16, 3, 5);
  auto e2 = canny_edges(noisy);
  for (float v : e2.data) CHECK((v == 0.0f || v == 1.0f));
}

TEST_CASE("canny: vertical step edge stays within one column of the step") {
  const int c = 9;
  VideoClip clip(1, 16, 16, 1, 8.0f, "step");
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) clip.at(0, y, x, 0) = x >= c ? 1.0f : 0.0f;
  }
  auto edges = canny_edges(clip, 0.05f, 0.2f);
  int edge_pixels = 0;
  for (int y = 0; y < 16; ++y) {
    bool row_has_edge = false;
    for (int x = 0; x < 16; ++x) {
      if (edges.at(0, y, x, 0) > 0) {
        ++edge_pixels;
        row_has_edge = true;
        CHECK(x >= c - 1);
        CHECK(x <= c + 1);
        // oracle: the gradient magnitude argmax of this row lies at the step
      }
    }
    CHECK(row_has_edge);
  }
  CHECK(edge_pixels >= 16);
}

TEST_CASE("mask_iou basics") {
  MaskFrame a(4, 4), b(4, 4);
  CHECK(mask_iou(a, b) == 1.0);  // both empty
  a.at(0, 0) = a.at(0, 1) = 1;
  CHECK(mask_iou(a, a) == 1.0);
  b.at(3, 3) = 1;
  CHECK(mask_iou(a, b) == 0.0);
  MaskFrame c(4, 4);
  c.at(0, 1) = c.at(1, 1) = 1;
  CHECK(mask_iou(a, c) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  MaskFrame wrong(3, 4);
  CHECK_THROWS_AS(mask_iou(a, wrong), core::ParameterError);
}

TEST_CASE("select_foreground_subset: trivial cases") {
  core::Rng rng(8);
  MaskSet ms;
  for (int i = 0; i < 4; ++i) ms.masks.push_back(random_mask(8, 8, rng, 0.2));
  ms.names = {"a", "b", "c", "d"};
  // fg = union of all masks -> full index set at IoU 1.0
  MaskFrame fg = union_masks(ms, {0, 1, 2, 3});
  auto sel = select_foreground_subset(fg, ms, 0.95);
  REQUIRE(sel.has_value());
  CHECK(mask_iou(fg, union_masks(ms, *sel)) == 1.0);

  // fg equals mask 0 alone; others disjoint from fg
  MaskSet disjoint;
  MaskFrame m0(8, 8);
  m0.at(1, 1) = m0.at(1, 2) = m0.at(2, 1) = 1;
  MaskFrame m1(8, 8);
  m1.at(6, 6) = 1;
  MaskFrame m2(8, 8);
  m2.at(7, 0) = 1;
  disjoint.masks = {m0, m1, m2};
  auto sel2 = select_foreground_subset(m0, disjoint, 0.95);
  REQUIRE(sel2.has_value());
  CHECK(*sel2 == std::vector<int>{0});

  // empty mask set -> none
  CHECK_FALSE(select_foreground_subset(m0, MaskSet{}, 0.95).has_value());
}

TEST_CASE("select_foreground_subset agrees with the exhaustive oracle") {
  core::Rng rng(101);
  int agreements = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int n = static_cast<int>(rng.next_int(1, 10));
    MaskSet ms;
    for (int i = 0; i < n; ++i) {
      ms.masks.push_back(random_mask(8, 8, rng, 0.15 + 0.5 * rng.next_double()));
    }
    // mix of reachable and unreachable foregrounds
    MaskFrame fg;
    if (trial % 3 == 0) {
      std::vector<int> pick;
      for (int i = 0; i < n; ++i) {
        if (rng.next_double() < 0.5) pick.push_back(i);
      }
      if (pick.empty()) pick.push_back(0);
      fg = union_masks(ms, pick);
      // flip a few pixels so the match is close but not always exact
      for (int flips = 0; flips < 2; ++flips) {
        if (rng.next_double() < 0.5) {
          fg.data[static_cast<size_t>(rng.next_int(0, 63))] ^= 1;
        }
      }
    } else {
      fg = random_mask(8, 8, rng, 0.4);
    }
    auto got = select_foreground_subset(fg, ms, 0.95);
    auto expect = subset_oracle(fg, ms, 0.95);
    CHECK(got == expect);
    if (got == expect) ++agreements;
  }
  CHECK(agreements == 300);
}

TEST_CASE("composite_masked: all-false, all-true, checkerboard") {
  auto base = random_clip(2, 6, 6, 3, 1, "base");
  auto donor = random_clip(2, 6, 6, 3, 2, "donor");
  MaskVideo none(2, 6, 6);
  CHECK(composite_masked(base, donor, none).data == base.data);
  MaskVideo all(2, 6, 6);
  std::fill(all.data.begin(), all.data.end(), 1);
  CHECK(composite_masked(base, donor, all).data == donor.data);
  MaskVideo checker(2, 6, 6);
  for (int f = 0; f < 2; ++f) {
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < 6; ++x) checker.at(f, y, x) = (y + x) % 2;
    }
  }
  auto out = composite_masked(base, donor, checker);
  for (int f = 0; f < 2; ++f) {
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < 6; ++x) {
        for (int c = 0; c < 3; ++c) {
          float expect = checker.at(f, y, x) ? donor.at(f, y, x, c) : base.at(f, y, x, c);
          CHECK(out.at(f, y, x, c) == expect);
        }
      }
    }
  }
}

TEST_CASE("mask_background_of: identity, zero, elementwise product") {
  auto control = random_clip(2, 5, 5, 1, 3, "ctrl");
  MaskVideo all(2, 5, 5);
  std::fill(all.data.begin(), all.data.end(), 1);
  CHECK(mask_background_of(control, all).data == control.data);
  MaskVideo none(2, 5, 5);
  auto zeroed = mask_background_of(control, none);
  for (float v : zeroed.data) CHECK(v == 0.0f);
  core::Rng rng(12);
  MaskVideo m(2, 5, 5);
  for (auto& v : m.data) v = rng.next_double() < 0.5;
  auto out = mask_background_of(control, m);
  for (size_t i = 0; i < out.data.size(); ++i) {
    CHECK(out.data[i] == (m.data[i] ? control.data[i] : 0.0f));
  }
}

TEST_CASE("segment_shots: constant video is one segment; known cuts found") {
  auto clip = solid(6, 8, 8, 3, 0.3f);
  auto segs = segment_shots(clip);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].start == 0);
  CHECK(segs[0].end == 6);

  // three constant blocks of different colors
  VideoClip multi(9, 8, 8, 3, 8.0f, "multi");
  for (int f = 0; f < 9; ++f) {
    float v = f < 3 ? 0.1f : (f < 6 ? 0.5f : 0.9f);
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) {
        for (int c = 0; c < 3; ++c) multi.at(f, y, x, c) = v;
      }
    }
  }
  auto s2 = segment_shots(multi, 0.1f);
  REQUIRE(s2.size() == 3);
  CHECK(s2[0].start == 0);
  CHECK(s2[0].end == 3);
  CHECK(s2[1].start == 3);
  CHECK(s2[1].end == 6);
  CHECK(s2[2].start == 6);
  CHECK(s2[2].end == 9);

  // partition invariant on random videos
  core::Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = random_clip(static_cast<int>(rng.next_int(2, 12)), 6, 6, 3, 700 + trial);
    auto segs3 = segment_shots(r, static_cast<float>(rng.next_double() * 0.3));
    int total = 0;
    int expect_start = 0;
    for (const auto& s : segs3) {
      CHECK(s.start == expect_start);
      CHECK(s.end > s.start);
      total += s.end - s.start;
      expect_start = s.end;
    }
    CHECK(total == r.t);
  }
}

TEST_CASE("render_subtitle: locality, band confinement, pixel-count oracle") {
  auto clip = random_clip(3, 24, 48, 3, 21, "subclip");
  SubtitleStyle style;
  style.color = {1.0f, 0.9f, 0.2f};
  auto out = render_subtitle(clip, "HI", SubtitlePosition::Bottom, style);
  Band band = subtitle_band(SubtitlePosition::Bottom, clip.h);
  // outside the band: bit-exact to input
  for (int f = 0; f < clip.t; ++f) {
    for (int y = 0; y < clip.h; ++y) {
      if (y >= band.y0 && y < band.y1) continue;
      for (int x = 0; x < clip.w; ++x) {
        for (int c = 0; c < 3; ++c) CHECK(out.at(f, y, x, c) == clip.at(f, y, x, c));
      }
    }
  }

  // on a black clip the changed-pixel count equals the font raster count x T
  auto black = solid(3, 24, 48, 3, 0.0f, "black");
  auto rendered = render_subtitle(black, "HI", SubtitlePosition::Top, style);
  int64_t nonzero = 0;
  for (int f = 0; f < rendered.t; ++f) {
    for (int y = 0; y < rendered.h; ++y) {
      for (int x = 0; x < rendered.w; ++x) {
        bool any = false;
        for (int c = 0; c < 3; ++c) any = any || rendered.at(f, y, x, c) != 0.0f;
        nonzero += any;
      }
    }
  }
  CHECK(nonzero == glyph_pixel_count("HI") * 3);

  CHECK_THROWS_AS(render_subtitle(clip, "", SubtitlePosition::Top, style),
                  core::ParameterError);
  CHECK_THROWS_AS(
      render_subtitle(clip, "THIS TEXT IS MUCH TOO LONG FOR THE FRAME", SubtitlePosition::Top,
                      style),
      core::LayoutError);
}

TEST_CASE("subtitle triplet: round trips and categories") {
  auto clip = core::snap_to_u8_grid(random_clip(2, 24, 48, 3, 22, "trip"));
  for (auto pos : {SubtitlePosition::Top, SubtitlePosition::Middle, SubtitlePosition::Bottom}) {
    auto t = build_subtitle_triplet(clip, "HELLO", "WORLD", pos, {});
    CHECK(t.add.category == core::Category::SubtitlesEdit);
    CHECK(t.remove.category == core::Category::SubtitlesEdit);
    CHECK(t.replace.category == core::Category::SubtitlesEdit);
    // remove-after-add round trip is bit-exact by construction
    CHECK(t.remove.target.data == t.add.source.data);
    CHECK(t.remove.source.data == t.add.target.data);
    const core::EditPair* members[3] = {&t.add, &t.remove, &t.replace};
    for (const auto* p : members) {
      CHECK(core::validate_pair(*p).empty());
    }
    // replace with a == b gives source == target bit-exact
    auto same = build_subtitle_triplet(clip, "SAME", "SAME", pos, {});
    CHECK(same.replace.source.data == same.replace.target.data);
  }
}

TEST_CASE("local add/remove pairs: construction symmetry") {
  auto original = random_clip(3, 12, 12, 3, 31, "orig");
  auto inpainted = original;
  MaskVideo mask(3, 12, 12);
  for (int f = 0; f < 3; ++f) {
    for (int y = 4; y < 8; ++y) {
      for (int x = 4; x < 8; ++x) {
        mask.at(f, y, x) = 1;
        for (int c = 0; c < 3; ++c) inpainted.at(f, y, x, c) = 0.5f;
      }
    }
  }
  auto add = build_local_add_pair(original, inpainted, "a red ball");
  CHECK(add.category == core::Category::LocalAdd);
  CHECK(add.target.data == original.data);  // target bit-exact the original
  CHECK(core::validate_pair(add).empty());
  // diff confined to the mask support
  for (int f = 0; f < 3; ++f) {
    for (int y = 0; y < 12; ++y) {
      for (int x = 0; x < 12; ++x) {
        for (int c = 0; c < 3; ++c) {
          if (!mask.at(f, y, x)) {
            CHECK(add.source.at(f, y, x, c) == add.target.at(f, y, x, c));
          }
        }
      }
    }
  }

  auto rem = build_local_remove_pair(original, inpainted, "a red ball");
  CHECK(rem.category == core::Category::LocalRemove);
  CHECK(rem.target.data == original.data);
  CHECK(core::validate_pair(rem).empty());

  auto wrong = solid(3, 10, 10, 3, 0.1f);
  CHECK_THROWS_AS(build_local_add_pair(original, wrong, "x"), core::ParameterError);
}

TEST_CASE("build_camera_pairs: exactly the 6 ordered transitions") {
  VideoClip video(9, 8, 8, 3, 8.0f, "cam");
  LabeledShots shots;
  shots.close = {0, 3, ShotType::Close};
  shots.medium = {3, 6, ShotType::Medium};
  shots.wide = {6, 9, ShotType::Wide};
  auto pairs = build_camera_pairs(shots, video);
  CHECK(pairs.size() == 6);
  // oracle: ordered pairs of distinct types
  std::set<std::string> ids;
  for (const auto& p : pairs) {
    ids.insert(p.id);
    CHECK(p.category == core::Category::CameraMultiShot);
    CHECK(core::validate_pair(p).empty());
  }
  CHECK(ids.size() == 6);
  std::set<std::string> expect;
  const char* names[3] = {"close", "medium", "wide"};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a != b) expect.insert("cam/camera/" + std::string(names[a]) + "-" + names[b]);
    }
  }
  CHECK(ids == expect);

  LabeledShots missing = shots;
  missing.wide = {6, 6, ShotType::Wide};  // empty segment
  CHECK_THROWS_AS(build_camera_pairs(missing, video), core::ParameterError);
}

TEST_CASE("build_creative_pairs: n(n-1) ordered pairs, no self-pairs") {
  auto instruction_for = [](int i, int j) {
    return "Transform variation " + std::to_string(i) + " into variation " + std::to_string(j);
  };
  for (int n : {2, 3, 4}) {
    std::vector<VideoClip> videos;
    for (int i = 0; i < n; ++i) {
      videos.push_back(random_clip(2, 8, 8, 3, 900 + i, "v" + std::to_string(i)));
    }
    auto pairs = build_creative_pairs(videos, instruction_for);
    CHECK(static_cast<int>(pairs.size()) == n * (n - 1));
    for (const auto& p : pairs) {
      CHECK(p.category == core::Category::CreativeEdit);
      CHECK(p.source.id != p.target.id);
      CHECK(core::validate_pair(p).empty());
    }
  }
  std::vector<VideoClip> one = {random_clip(2, 8, 8, 3, 950, "solo")};
  CHECK_THROWS_AS(build_creative_pairs(one, instruction_for), core::ParameterError);
}

TEST_CASE("dilate_mask grows support by one pixel per iteration") {
  MaskVideo m(1, 7, 7);
  m.at(0, 3, 3) = 1;
  auto d = dilate_mask(m, 1);
  CHECK(d.count() == 9);
  auto d2 = dilate_mask(m, 2);
  CHECK(d2.count() == 25);
}
