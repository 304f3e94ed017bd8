// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>

#include <json.hpp>

#include "ivedit/core/io.hpp"
#include "ivedit/core/types.hpp"

namespace ivedit::filtering {

struct DatasetStats {
  std::array<int64_t, core::kCategoryCount> counts{};
  std::array<double, core::kCategoryCount> ratios{};
  int64_t total = 0;
  double mean_instruction_words = 0.0;
  std::map<int, int64_t> frame_histogram;

  nlohmann::json to_json() const;
};

// Ratio table from raw per-category counts (enum order).
DatasetStats stats_from_counts(const std::array<int64_t, core::kCategoryCount>& counts);

// Full statistics over a pair manifest. Throws DataError on an empty one.
DatasetStats compute_dataset_stats(const std::vector<core::ManifestPair>& pairs);

}  // namespace ivedit::filtering
