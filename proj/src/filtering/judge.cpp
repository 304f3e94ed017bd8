// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/filtering/judge.hpp"

#include <algorithm>
#include <sstream>

#include "ivedit/core/errors.hpp"
#include "ivedit/core/text.hpp"

using nlohmann::json;

namespace ivedit::filtering {

using core::DataError;
using core::ParseError;
using core::RangeError;
using core::ScoreTriple;

namespace {

// Strips markdown bold markers, surrounding whitespace, and label trailers.
std::string canonical_label(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '*' || c == '_' || c == '#') continue;
    out.push_back(c);
  }
  out = core::trim(out);
  while (!out.empty() && (out.back() == '.' || out.back() == ':')) out.pop_back();
  return core::to_lower(core::trim(out));
}

// Finds "<label>: <value>" in any line; returns the value part.
std::optional<std::string> find_labeled_line(const std::vector<std::string>& lines,
                                             const std::string& label) {
  for (const auto& line : lines) {
    size_t colon = line.find(':');
    if (colon == std::string::npos) continue;
    if (canonical_label(line.substr(0, colon)) == label) {
      return core::trim(line.substr(colon + 1));
    }
  }
  return std::nullopt;
}

int parse_score(const std::string& value, const std::string& line_name) {
  // first integer in the value part
  size_t i = 0;
  while (i < value.size() && !std::isdigit(static_cast<unsigned char>(value[i]))) ++i;
  if (i == value.size()) {
    throw ParseError("judge response: line '" + line_name + "' has no numeric score");
  }
  size_t j = i;
  while (j < value.size() && std::isdigit(static_cast<unsigned char>(value[j]))) ++j;
  int score = std::stoi(value.substr(i, j - i));
  if (score < 1 || score > 5) {
    throw RangeError("judge response: score " + std::to_string(score) + " on line '" +
                     line_name + "' is outside 1..5");
  }
  return score;
}

}  // namespace

ScoreTriple parse_judge_response(const std::string& raw) {
  auto lines = core::split_lines(raw);
  auto reasoning = find_labeled_line(lines, "brief reasoning");
  if (!reasoning) throw ParseError("judge response: missing 'Brief reasoning' line");
  auto compliance = find_labeled_line(lines, "instruction compliance");
  if (!compliance) throw ParseError("judge response: missing 'Instruction Compliance' line");
  auto consistency = find_labeled_line(lines, "consistency & detail fidelity");
  if (!consistency) {
    throw ParseError("judge response: missing 'Consistency & Detail Fidelity' line");
  }
  auto quality = find_labeled_line(lines, "visual quality & stability");
  if (!quality) throw ParseError("judge response: missing 'Visual Quality & Stability' line");

  ScoreTriple t;
  t.reasoning = *reasoning;
  t.compliance = parse_score(*compliance, "Instruction Compliance");
  t.consistency = parse_score(*consistency, "Consistency & Detail Fidelity");
  t.quality = parse_score(*quality, "Visual Quality & Stability");
  return t;
}

std::string format_judge_response(const ScoreTriple& t) {
  std::ostringstream out;
  out << "Brief reasoning: " << t.reasoning << "\n"
      << "Instruction Compliance: " << t.compliance << "\n"
      << "Consistency & Detail Fidelity: " << t.consistency << "\n"
      << "Visual Quality & Stability: " << t.quality << "\n";
  return out.str();
}

ScoreTriple enforce_compliance_cap(ScoreTriple t) {
  bool violated = t.consistency > t.compliance || t.quality > t.compliance;
  t.consistency = std::min(t.consistency, t.compliance);
  t.quality = std::min(t.quality, t.compliance);
  t.cap_violated = t.cap_violated || violated;
  return t;
}

double pair_mean_score(const ScoreTriple& t) {
  return (t.compliance + t.consistency + t.quality) / 3.0;
}

json RetentionReport::to_json() const {
  json per_cat = json::object();
  for (const auto& [cat, kd] : per_category) {
    per_cat[cat] = json{{"kept", kd.first}, {"dropped", kd.second}};
  }
  return json{{"threshold", threshold},
              {"rule", rule == RetentionRule::MeanScore ? "mean" : "min_dimension"},
              {"total", total},
              {"kept", kept},
              {"dropped", dropped},
              {"per_category", per_cat}};
}

std::pair<std::vector<ScoredPair>, RetentionReport> retain(const std::vector<ScoredPair>& scored,
                                                           double threshold,
                                                           RetentionRule rule) {
  std::vector<ScoredPair> kept;
  RetentionReport report;
  report.threshold = threshold;
  report.rule = rule;
  report.total = static_cast<int64_t>(scored.size());
  for (const auto& p : scored) {
    bool keep;
    if (rule == RetentionRule::MeanScore) {
      keep = pair_mean_score(p.scores) >= threshold;
    } else {
      keep = p.scores.compliance >= threshold && p.scores.consistency >= threshold &&
             p.scores.quality >= threshold;
    }
    auto& slot = report.per_category[std::string(core::category_name(p.category))];
    if (keep) {
      kept.push_back(p);
      ++report.kept;
      ++slot.first;
    } else {
      ++report.dropped;
      ++slot.second;
    }
  }
  return {std::move(kept), std::move(report)};
}

double judge_accuracy(const std::vector<LabeledPair>& labels,
                      const std::map<std::string, core::ScoreTriple>& judged) {
  if (labels.empty()) throw DataError("judge_accuracy: no labeled pairs");
  int64_t matches = 0;
  for (const auto& l : labels) {
    auto it = judged.find(l.pair_id);
    if (it == judged.end()) {
      throw DataError("judge_accuracy: no judgment for pair " + l.pair_id);
    }
    bool predicted_positive = pair_mean_score(it->second) > 3.0;
    matches += predicted_positive == l.human_positive;
  }
  return static_cast<double>(matches) / static_cast<double>(labels.size());
}

std::string scored_manifest_line(const ScoredPair& p) {
  json j{{"pair_id", p.pair_id},
         {"category", std::string(core::category_name(p.category))},
         {"scores",
          {{"compliance", p.scores.compliance},
           {"consistency", p.scores.consistency},
           {"quality", p.scores.quality}}},
         {"reasoning", p.scores.reasoning},
         {"cap_violated", p.scores.cap_violated},
         {"mean", pair_mean_score(p.scores)}};
  return j.dump();
}

ScoredPair parse_scored_manifest_line(const std::string& line) {
  json j = json::parse(line);
  ScoredPair p;
  p.pair_id = j.at("pair_id").get<std::string>();
  auto cat = core::parse_category(j.at("category").get<std::string>());
  if (!cat) throw DataError("scored manifest: unknown category " + j.at("category").dump());
  p.category = *cat;
  p.scores.compliance = j.at("scores").at("compliance").get<int>();
  p.scores.consistency = j.at("scores").at("consistency").get<int>();
  p.scores.quality = j.at("scores").at("quality").get<int>();
  p.scores.reasoning = j.at("reasoning").get<std::string>();
  p.scores.cap_violated = j.at("cap_violated").get<bool>();
  return p;
}

}  // namespace ivedit::filtering
