// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/filtering/stats.hpp"

#include "ivedit/core/errors.hpp"
#include "ivedit/core/text.hpp"

using nlohmann::json;

namespace ivedit::filtering {

using core::DataError;

json DatasetStats::to_json() const {
  json by_cat = json::object();
  for (int i = 0; i < core::kCategoryCount; ++i) {
    auto name = std::string(core::category_name(static_cast<core::Category>(i)));
    by_cat[name] = json{{"count", counts[static_cast<size_t>(i)]},
                        {"ratio", ratios[static_cast<size_t>(i)]}};
  }
  json hist = json::object();
  for (const auto& [frames, count] : frame_histogram) {
    hist[std::to_string(frames)] = count;
  }
  return json{{"total", total},
              {"per_category", by_cat},
              {"mean_instruction_words", mean_instruction_words},
              {"frame_histogram", hist}};
}

DatasetStats stats_from_counts(const std::array<int64_t, core::kCategoryCount>& counts) {
  DatasetStats s;
  s.counts = counts;
  for (int64_t c : counts) s.total += c;
  if (s.total == 0) throw DataError("stats_from_counts: zero total");
  for (size_t i = 0; i < counts.size(); ++i) {
    s.ratios[i] = static_cast<double>(counts[i]) / static_cast<double>(s.total);
  }
  return s;
}

DatasetStats compute_dataset_stats(const std::vector<core::ManifestPair>& pairs) {
  if (pairs.empty()) throw DataError("compute_dataset_stats: empty manifest");
  std::array<int64_t, core::kCategoryCount> counts{};
  int64_t words = 0;
  std::map<int, int64_t> hist;
  for (const auto& p : pairs) {
    ++counts[static_cast<size_t>(p.category)];
    words += core::word_count(p.instruction);
    ++hist[p.frames];
  }
  DatasetStats s = stats_from_counts(counts);
  s.mean_instruction_words = static_cast<double>(words) / static_cast<double>(pairs.size());
  s.frame_histogram = std::move(hist);
  return s;
}

}  // namespace ivedit::filtering
