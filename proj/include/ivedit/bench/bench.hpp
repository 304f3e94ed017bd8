// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Benchmark harness: manifest handling for the 431-pair / 8-category
// evaluation set, per-category rubric prompt construction, the evaluation
// loop over a model under test and a judge, aggregation, and table output.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ivedit/adapters/adapters.hpp"
#include "ivedit/core/types.hpp"
#include "ivedit/filtering/judge.hpp"
#include "ivedit/pipeline/store.hpp"

namespace ivedit::bench {

struct BenchEntry {
  std::string pair_id;
  core::Category category = core::Category::GlobalStyle;
  std::string source_ref;  // clip ref, relative to the store root
  std::string instruction;
};

struct BenchManifest {
  std::vector<BenchEntry> entries;
  std::array<int, core::kCategoryCount> counts{};
};

// Reference per-category sizes of the full benchmark (enum order); total 431.
const std::array<int, core::kCategoryCount>& reference_counts();

// Synthetic manifest skeleton with the reference counts (clip refs are
// placeholders); used by tests and for schema documentation.
BenchManifest make_reference_manifest();

BenchManifest manifest_from_entries(std::vector<BenchEntry> entries);
void save_manifest(const BenchManifest& m, const std::filesystem::path& file);
// Throws DataError on unknown categories or duplicate pair ids.
BenchManifest load_manifest(const std::filesystem::path& file);

// Category rubric prompt with the <edit_prompt> placeholder substituted.
// Deterministic; every template carries the three 1-to-5 scales and the
// compliance-cap sentence.
std::string build_judge_prompt(core::Category category, const std::string& instruction);
const std::string& judge_prompt_template(core::Category category);

// Per-category uniform sample without replacement, deterministic per seed.
// n_per_category is clamped to each category's size.
BenchManifest subsample(const BenchManifest& m, int n_per_category, uint64_t seed);

struct EvalRow {
  std::string pair_id;
  core::Category category = core::Category::GlobalStyle;
  bool ok = false;
  core::ScoreTriple scores;  // capped
  double mean = 0.0;
  std::string edited_ref;
  std::string raw_response_ref;
  std::string error;

  nlohmann::json to_json() const;
  static EvalRow from_json(const nlohmann::json& j);
};

// Runs the model under test, judges the result, parses and caps the scores,
// and persists the edited clip plus raw response. Failures are recorded in
// the row, not thrown.
EvalRow evaluate_pair(const BenchEntry& entry, adapters::AdapterSet& adapters,
                      pipeline::ArtifactStore& store);

enum class AverageMode { Micro, Macro };

struct ResultTable {
  std::array<double, core::kCategoryCount> category_means{};
  std::array<int, core::kCategoryCount> category_counts{};
  double overall = 0.0;
  AverageMode mode = AverageMode::Micro;
  std::string label = "model";
  int failed = 0;
};

// Per-pair score = mean of the three capped dimensions; category mean over
// its pairs; overall micro-averages over pairs (macro averages the category
// means). Throws DataError when no row succeeded.
ResultTable aggregate(const std::vector<EvalRow>& rows, AverageMode mode = AverageMode::Micro,
                      const std::string& label = "model");

// Round-half-away-from-zero to two decimals, applied to the decimal
// rendering of the value (2.405 -> "2.41", 2.4049 -> "2.40").
std::string round2_half_away(double v);

// Columns ordered: label, Overall, then the eight categories in the
// reference table order.
std::string format_markdown(const ResultTable& t);
std::string format_csv(const ResultTable& t);

// Table column order (categories as displayed, left to right).
const std::array<core::Category, core::kCategoryCount>& table_category_order();

}  // namespace ivedit::bench
