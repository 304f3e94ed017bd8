// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/pipeline/subtitles.hpp"

#include <cctype>
#include <map>

#include "ivedit/core/errors.hpp"
#include "ivedit/core/io.hpp"

namespace ivedit::pipeline {

using core::LayoutError;
using core::ParameterError;
using core::VideoClip;

std::string_view subtitle_position_name(SubtitlePosition p) {
  switch (p) {
    case SubtitlePosition::Top: return "top";
    case SubtitlePosition::Middle: return "middle";
    case SubtitlePosition::Bottom: return "bottom";
  }
  return "?";
}

Band subtitle_band(SubtitlePosition pos, int height) {
  int third = height / 3;
  switch (pos) {
    case SubtitlePosition::Top: return {0, third};
    case SubtitlePosition::Middle: return {third, 2 * third};
    case SubtitlePosition::Bottom: return {2 * third, height};
  }
  return {0, height};
}

namespace {

// 5x7 bitmap font, 7 rows of 5 bits each (bit 4 = leftmost column).
const std::map<char, std::array<uint8_t, 7>>& font_table() {
  static const std::map<char, std::array<uint8_t, 7>> table = {
      {'A', {0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
      {'B', {0b11110, 0b10001, 0b11110, 0b10001, 0b10001, 0b10001, 0b11110}},
      {'C', {0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110}},
      {'D', {0b11100, 0b10010, 0b10001, 0b10001, 0b10001, 0b10010, 0b11100}},
      {'E', {0b11111, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000, 0b11111}},
      {'F', {0b11111, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000, 0b10000}},
      {'G', {0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111}},
      {'H', {0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001, 0b10001}},
      {'I', {0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
      {'J', {0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100}},
      {'K', {0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001}},
      {'L', {0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111}},
      {'M', {0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001}},
      {'N', {0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001, 0b10001}},
      {'O', {0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
      {'P', {0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000}},
      {'Q', {0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101}},
      {'R', {0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001}},
      {'S', {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110}},
      {'T', {0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100}},
      {'U', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
      {'V', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100}},
      {'W', {0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b11011, 0b10001}},
      {'X', {0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001}},
      {'Y', {0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100, 0b00100}},
      {'Z', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111}},
      {'0', {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110}},
      {'1', {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
      {'2', {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111}},
      {'3', {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110}},
      {'4', {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010}},
      {'5', {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110}},
      {'6', {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110}},
      {'7', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000}},
      {'8', {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110}},
      {'9', {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100}},
      {' ', {0, 0, 0, 0, 0, 0, 0}},
      {'.', {0, 0, 0, 0, 0, 0b00100, 0b00100}},
      {',', {0, 0, 0, 0, 0b00100, 0b00100, 0b01000}},
      {'!', {0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0, 0b00100}},
      {'?', {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0, 0b00100}},
      {'-', {0, 0, 0, 0b01110, 0, 0, 0}},
      {'\'', {0b00100, 0b00100, 0b01000, 0, 0, 0, 0}},
      {':', {0, 0b00100, 0, 0, 0, 0b00100, 0}},
  };
  return table;
}

char normalize_char(char c) {
  char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (font_table().count(u)) return u;
  return '?';
}

constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;
constexpr int kAdvance = 6;  // 5 columns + 1 spacing

}  // namespace

const std::array<uint8_t, 7>& glyph_rows(char c) { return font_table().at(normalize_char(c)); }

int64_t glyph_pixel_count(const std::string& text) {
  int64_t count = 0;
  for (char c : text) {
    for (uint8_t row : glyph_rows(c)) {
      count += __builtin_popcount(static_cast<unsigned>(row));
    }
  }
  return count;
}

int subtitle_raster_width(const std::string& text, int scale) {
  if (text.empty()) return 0;
  int cols = static_cast<int>(text.size()) * kAdvance - (kAdvance - kGlyphW);
  return cols * scale;
}

int subtitle_raster_height(int scale) { return kGlyphH * scale; }

VideoClip render_subtitle(const VideoClip& clip, const std::string& text, SubtitlePosition pos,
                          const SubtitleStyle& style) {
  if (text.empty()) throw ParameterError("render_subtitle: text must be nonempty");
  if (style.scale < 1) throw ParameterError("render_subtitle: scale must be >= 1");
  int width = subtitle_raster_width(text, style.scale);
  int height = subtitle_raster_height(style.scale);
  if (width > clip.w) {
    throw LayoutError("render_subtitle: text '" + text + "' is wider than the frame");
  }
  Band band = subtitle_band(pos, clip.h);
  if (height > band.y1 - band.y0) {
    throw LayoutError("render_subtitle: text is taller than the position band");
  }
  int x0 = (clip.w - width) / 2;
  int y0 = band.y0 + (band.y1 - band.y0 - height) / 2;

  // Snap the style color onto the 8-bit grid so persisted clips stay exact.
  float color[3];
  for (int i = 0; i < 3; ++i) {
    color[i] = core::dequantize_u8(core::quantize_u8(style.color[static_cast<size_t>(i)]));
  }

  // Paint the glyph raster on every frame; all other pixels stay untouched.
  VideoClip out = clip;
  out.id = clip.id + "/sub";
  for (size_t ci = 0; ci < text.size(); ++ci) {
    const auto& rows = glyph_rows(text[ci]);
    int gx = x0 + static_cast<int>(ci) * kAdvance * style.scale;
    for (int ry = 0; ry < kGlyphH; ++ry) {
      for (int rx = 0; rx < kGlyphW; ++rx) {
        if (!(rows[static_cast<size_t>(ry)] & (1u << (kGlyphW - 1 - rx)))) continue;
        for (int sy = 0; sy < style.scale; ++sy) {
          for (int sx = 0; sx < style.scale; ++sx) {
            int y = y0 + ry * style.scale + sy;
            int x = gx + rx * style.scale + sx;
            for (int f = 0; f < clip.t; ++f) {
              for (int c = 0; c < clip.c; ++c) {
                out.at(f, y, x, c) = color[std::min(c, 2)];
              }
            }
          }
        }
      }
    }
  }
  return out;
}

SubtitleTriplet build_subtitle_triplet(const VideoClip& clip, const std::string& text_a,
                                       const std::string& text_b, SubtitlePosition pos,
                                       const SubtitleStyle& style) {
  VideoClip with_a = render_subtitle(clip, text_a, pos, style);
  VideoClip with_b = render_subtitle(clip, text_b, pos, style);
  std::string where(subtitle_position_name(pos));
  SubtitleTriplet t;
  t.add.source = clip;
  t.add.target = with_a;
  t.add.category = core::Category::SubtitlesEdit;
  t.add.instruction = "Add the subtitle \"" + text_a + "\" at the " + where + " of the video.";
  t.add.backward_instruction =
      "Remove the subtitle \"" + text_a + "\" from the " + where + " of the video.";
  t.add.id = clip.id + "/sub/" + where + "/add";

  t.remove.source = with_a;
  t.remove.target = clip;
  t.remove.category = core::Category::SubtitlesEdit;
  t.remove.instruction =
      "Remove the subtitle \"" + text_a + "\" from the " + where + " of the video.";
  t.remove.backward_instruction = t.add.instruction;
  t.remove.id = clip.id + "/sub/" + where + "/remove";

  t.replace.source = with_a;
  t.replace.target = with_b;
  t.replace.category = core::Category::SubtitlesEdit;
  t.replace.instruction = "Replace the subtitle \"" + text_a + "\" at the " + where +
                          " of the video with \"" + text_b + "\".";
  t.replace.backward_instruction = "Replace the subtitle \"" + text_b + "\" at the " + where +
                                   " of the video with \"" + text_a + "\".";
  t.replace.id = clip.id + "/sub/" + where + "/replace";
  return t;
}

}  // namespace ivedit::pipeline
