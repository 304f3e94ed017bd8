// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/core/types.hpp"

#include <algorithm>

namespace ivedit::core {

int64_t MaskVideo::count() const {
  return std::count_if(data.begin(), data.end(), [](uint8_t v) { return v != 0; });
}

int64_t MaskFrame::count() const {
  return std::count_if(data.begin(), data.end(), [](uint8_t v) { return v != 0; });
}

const std::array<Category, kCategoryCount>& all_categories() {
  static const std::array<Category, kCategoryCount> cats = {
      Category::GlobalStyle,     Category::BackgroundChange, Category::LocalChange,
      Category::LocalRemove,     Category::LocalAdd,         Category::SubtitlesEdit,
      Category::CameraMultiShot, Category::CreativeEdit,
  };
  return cats;
}

bool spatially_aligned(Category c) {
  switch (c) {
    case Category::GlobalStyle:
    case Category::BackgroundChange:
    case Category::LocalChange:
    case Category::LocalRemove:
    case Category::LocalAdd:
    case Category::SubtitlesEdit:
      return true;
    case Category::CameraMultiShot:
    case Category::CreativeEdit:
      return false;
  }
  return false;
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::GlobalStyle: return "GlobalStyle";
    case Category::BackgroundChange: return "BackgroundChange";
    case Category::LocalChange: return "LocalChange";
    case Category::LocalRemove: return "LocalRemove";
    case Category::LocalAdd: return "LocalAdd";
    case Category::SubtitlesEdit: return "SubtitlesEdit";
    case Category::CameraMultiShot: return "CameraMultiShot";
    case Category::CreativeEdit: return "CreativeEdit";
  }
  return "?";
}

std::string_view category_label(Category c) {
  switch (c) {
    case Category::GlobalStyle: return "Global Style";
    case Category::BackgroundChange: return "Background Change";
    case Category::LocalChange: return "Local Change";
    case Category::LocalRemove: return "Local Remove";
    case Category::LocalAdd: return "Local Add";
    case Category::SubtitlesEdit: return "Subtitle Edit";
    case Category::CameraMultiShot: return "Camera Edit";
    case Category::CreativeEdit: return "Creative Edit";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view name) {
  for (Category c : all_categories()) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

}  // namespace ivedit::core
