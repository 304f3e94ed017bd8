// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic subtitle rasterizer: embedded 5x7 bitmap font, integer
// pixel placement, no anti-aliasing, so add -> remove round trips are
// bit-exact. Text renders centered inside one of three horizontal bands.

#pragma once

#include <array>
#include <string>

#include "ivedit/core/types.hpp"

namespace ivedit::pipeline {

enum class SubtitlePosition { Top, Middle, Bottom };

std::string_view subtitle_position_name(SubtitlePosition p);

struct SubtitleStyle {
  int id = 0;
  int scale = 1;
  std::array<float, 3> color = {1.0f, 1.0f, 1.0f};
};

struct Band {
  int y0 = 0;
  int y1 = 0;  // exclusive
};

// The horizontal third of the frame covered by a position.
Band subtitle_band(SubtitlePosition pos, int height);

// Glyph bitmap rows (7 rows x 5 bits) for a character; unknown characters
// map to '?'. Lowercase maps to uppercase.
const std::array<uint8_t, 7>& glyph_rows(char c);

// Number of set bits in the rendered raster of `text` at scale 1.
int64_t glyph_pixel_count(const std::string& text);

// Rendered raster width/height in pixels for a text at a given scale.
int subtitle_raster_width(const std::string& text, int scale);
int subtitle_raster_height(int scale);

// Throws LayoutError when the raster does not fit the frame or band, and
// ParameterError on empty text / bad scale.
core::VideoClip render_subtitle(const core::VideoClip& clip, const std::string& text,
                                SubtitlePosition pos, const SubtitleStyle& style = {});

struct SubtitleTriplet {
  core::EditPair add;
  core::EditPair remove;
  core::EditPair replace;
};

// add: clip -> clip+A; remove: clip+A -> clip; replace: clip+A -> clip+B.
SubtitleTriplet build_subtitle_triplet(const core::VideoClip& clip, const std::string& text_a,
                                       const std::string& text_b, SubtitlePosition pos,
                                       const SubtitleStyle& style = {});

}  // namespace ivedit::pipeline
