// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Stage-3 quality filtering: judge-response parsing, compliance-cap
// enforcement, threshold retention, and judge-accuracy validation.
//
// Response grammar (case-insensitive labels, any line order, tolerating
// markdown bold markers, trailing periods/colons and extra whitespace):
//   Brief reasoning: <free text>
//   Instruction Compliance: <int 1..5>
//   Consistency & Detail Fidelity: <int 1..5>
//   Visual Quality & Stability: <int 1..5>

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ivedit/core/types.hpp"

namespace ivedit::filtering {

// Throws ParseError naming the missing line, RangeError for scores outside
// 1..5.
core::ScoreTriple parse_judge_response(const std::string& raw);

// Serializes a triple back into the canonical four-line response format.
std::string format_judge_response(const core::ScoreTriple& t);

// Clamps consistency and quality to the compliance score; sets cap_violated
// iff any clamp occurred. Idempotent.
core::ScoreTriple enforce_compliance_cap(core::ScoreTriple t);

double pair_mean_score(const core::ScoreTriple& t);

struct ScoredPair {
  std::string pair_id;
  core::Category category = core::Category::GlobalStyle;
  core::ScoreTriple scores;  // capped
};

enum class RetentionRule {
  MeanScore,      // keep iff mean of the three capped scores >= threshold
  MinDimension,   // keep iff every dimension >= threshold
};

struct RetentionReport {
  double threshold = 3.0;
  RetentionRule rule = RetentionRule::MeanScore;
  int64_t total = 0;
  int64_t kept = 0;
  int64_t dropped = 0;
  std::map<std::string, std::pair<int64_t, int64_t>> per_category;  // kept, dropped

  nlohmann::json to_json() const;
};

std::pair<std::vector<ScoredPair>, RetentionReport> retain(
    const std::vector<ScoredPair>& scored, double threshold = 3.0,
    RetentionRule rule = RetentionRule::MeanScore);

struct LabeledPair {
  std::string pair_id;
  bool human_positive = false;  // human mean score > 3
};

// Fraction of pairs where (judge mean > 3) matches the human label.
// Throws DataError when a labeled pair has no judgment.
double judge_accuracy(const std::vector<LabeledPair>& labels,
                      const std::map<std::string, core::ScoreTriple>& judged);

// Scored manifest JSON Lines: one object per pair.
std::string scored_manifest_line(const ScoredPair& p);
ScoredPair parse_scored_manifest_line(const std::string& line);

}  // namespace ivedit::filtering
