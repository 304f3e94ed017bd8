// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/bench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "ivedit/core/errors.hpp"
#include "ivedit/core/rng.hpp"

using nlohmann::json;

namespace ivedit::bench {

using core::Category;
using core::DataError;

const std::array<int, core::kCategoryCount>& reference_counts() {
  // enum order: GlobalStyle, BackgroundChange, LocalChange, LocalRemove,
  // LocalAdd, SubtitlesEdit, CameraMultiShot, CreativeEdit
  static const std::array<int, core::kCategoryCount> counts = {58, 59, 65, 59,
                                                               67, 50, 43, 30};
  return counts;
}

const std::array<Category, core::kCategoryCount>& table_category_order() {
  static const std::array<Category, core::kCategoryCount> order = {
      Category::GlobalStyle, Category::BackgroundChange, Category::LocalChange,
      Category::LocalRemove, Category::LocalAdd,         Category::SubtitlesEdit,
      Category::CreativeEdit, Category::CameraMultiShot,
  };
  return order;
}

BenchManifest manifest_from_entries(std::vector<BenchEntry> entries) {
  BenchManifest m;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.pair_id).second) {
      throw DataError("bench manifest: duplicate pair_id " + e.pair_id);
    }
    ++m.counts[static_cast<size_t>(e.category)];
  }
  m.entries = std::move(entries);
  return m;
}

BenchManifest make_reference_manifest() {
  std::vector<BenchEntry> entries;
  for (int ci = 0; ci < core::kCategoryCount; ++ci) {
    Category cat = static_cast<Category>(ci);
    for (int k = 0; k < reference_counts()[static_cast<size_t>(ci)]; ++k) {
      BenchEntry e;
      e.pair_id = std::string(core::category_name(cat)) + "-" + std::to_string(k);
      e.category = cat;
      e.source_ref = "clips/placeholder";
      e.instruction = "Reference entry " + std::to_string(k) + " for " +
                      std::string(core::category_label(cat)) + " evaluation.";
      entries.push_back(std::move(e));
    }
  }
  return manifest_from_entries(std::move(entries));
}

void save_manifest(const BenchManifest& m, const std::filesystem::path& file) {
  std::ostringstream out;
  for (const auto& e : m.entries) {
    out << json{{"pair_id", e.pair_id},
                {"category", std::string(core::category_name(e.category))},
                {"source", e.source_ref},
                {"instruction", e.instruction}}
               .dump()
        << "\n";
  }
  core::write_text_file_atomic(file, out.str());
}

BenchManifest load_manifest(const std::filesystem::path& file) {
  std::string text = core::read_text_file(file);
  std::vector<BenchEntry> entries;
  size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw DataError("bench manifest line " + std::to_string(line_no) + ": invalid JSON");
    }
    BenchEntry e;
    e.pair_id = j.at("pair_id").get<std::string>();
    auto cat = core::parse_category(j.at("category").get<std::string>());
    if (!cat) {
      throw DataError("bench manifest line " + std::to_string(line_no) +
                      ": unknown category " + j.at("category").dump());
    }
    e.category = *cat;
    e.source_ref = j.at("source").get<std::string>();
    e.instruction = j.at("instruction").get<std::string>();
    entries.push_back(std::move(e));
  }
  return manifest_from_entries(std::move(entries));
}

BenchManifest subsample(const BenchManifest& m, int n_per_category, uint64_t seed) {
  if (n_per_category < 1) throw core::ParameterError("subsample: n must be >= 1");
  std::vector<size_t> selected;
  core::Rng root(core::mix64(seed, core::fnv1a64("bench-subsample")));
  for (int ci = 0; ci < core::kCategoryCount; ++ci) {
    Category cat = static_cast<Category>(ci);
    std::vector<size_t> pool;
    for (size_t i = 0; i < m.entries.size(); ++i) {
      if (m.entries[i].category == cat) pool.push_back(i);
    }
    core::Rng rng = root.fork(core::category_name(cat));
    int take = std::min<int>(n_per_category, static_cast<int>(pool.size()));
    // partial Fisher-Yates
    for (int k = 0; k < take; ++k) {
      size_t j = static_cast<size_t>(rng.next_int(k, static_cast<int64_t>(pool.size()) - 1));
      std::swap(pool[static_cast<size_t>(k)], pool[j]);
    }
    selected.insert(selected.end(), pool.begin(), pool.begin() + take);
  }
  std::sort(selected.begin(), selected.end());
  std::vector<BenchEntry> entries;
  for (size_t i : selected) entries.push_back(m.entries[i]);
  return manifest_from_entries(std::move(entries));
}

json EvalRow::to_json() const {
  return json{{"pair_id", pair_id},
              {"category", std::string(core::category_name(category))},
              {"ok", ok},
              {"scores",
               {{"compliance", scores.compliance},
                {"consistency", scores.consistency},
                {"quality", scores.quality}}},
              {"cap_violated", scores.cap_violated},
              {"reasoning", scores.reasoning},
              {"mean", mean},
              {"edited", edited_ref},
              {"raw_response", raw_response_ref},
              {"error", error}};
}

EvalRow EvalRow::from_json(const json& j) {
  EvalRow r;
  r.pair_id = j.at("pair_id").get<std::string>();
  r.category = *core::parse_category(j.at("category").get<std::string>());
  r.ok = j.at("ok").get<bool>();
  r.scores.compliance = j.at("scores").at("compliance").get<int>();
  r.scores.consistency = j.at("scores").at("consistency").get<int>();
  r.scores.quality = j.at("scores").at("quality").get<int>();
  r.scores.cap_violated = j.at("cap_violated").get<bool>();
  r.scores.reasoning = j.at("reasoning").get<std::string>();
  r.mean = j.at("mean").get<double>();
  r.edited_ref = j.value("edited", "");
  r.raw_response_ref = j.value("raw_response", "");
  r.error = j.value("error", "");
  return r;
}

EvalRow evaluate_pair(const BenchEntry& entry, adapters::AdapterSet& adapters,
                      pipeline::ArtifactStore& store) {
  EvalRow row;
  row.pair_id = entry.pair_id;
  row.category = entry.category;
  try {
    adapters::Request model_req{
        entry.pair_id + "/edit",
        json{{"source", entry.source_ref}, {"instruction", entry.instruction}}};
    auto model_resp = adapters.call(adapters::Capability::EditModelUnderTest, model_req);
    row.edited_ref = model_resp.payload.at("video").get<std::string>();

    std::string prompt = build_judge_prompt(entry.category, entry.instruction);
    adapters::Request judge_req{entry.pair_id + "/judge",
                                json{{"source", entry.source_ref},
                                     {"edited", row.edited_ref},
                                     {"prompt", prompt}}};
    auto judge_resp = adapters.call(adapters::Capability::Judge, judge_req);
    std::string raw = judge_resp.payload.at("raw").get<std::string>();
    row.raw_response_ref =
        store.put_bytes(std::vector<uint8_t>(raw.begin(), raw.end()), "txt");
    row.scores = filtering::enforce_compliance_cap(filtering::parse_judge_response(raw));
    row.mean = filtering::pair_mean_score(row.scores);
    row.ok = true;
  } catch (const core::Error& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

ResultTable aggregate(const std::vector<EvalRow>& rows, AverageMode mode,
                      const std::string& label) {
  ResultTable t;
  t.mode = mode;
  t.label = label;
  std::array<double, core::kCategoryCount> sums{};
  double total_sum = 0.0;
  int64_t total_count = 0;
  for (const auto& r : rows) {
    if (!r.ok) {
      ++t.failed;
      continue;
    }
    size_t ci = static_cast<size_t>(r.category);
    sums[ci] += r.mean;
    ++t.category_counts[ci];
    total_sum += r.mean;
    ++total_count;
  }
  if (total_count == 0) throw DataError("aggregate: no successful evaluations");
  int present = 0;
  double macro_sum = 0.0;
  for (size_t ci = 0; ci < sums.size(); ++ci) {
    if (t.category_counts[ci] > 0) {
      t.category_means[ci] = sums[ci] / t.category_counts[ci];
      macro_sum += t.category_means[ci];
      ++present;
    }
  }
  t.overall = mode == AverageMode::Micro ? total_sum / static_cast<double>(total_count)
                                         : macro_sum / present;
  return t;
}

std::string round2_half_away(double v) {
  // Render with headroom, then round the decimal string at two places,
  // half away from zero. Avoids binary round-to-even surprises (2.405 must
  // become "2.41" although its double is fractionally below the half).
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", std::fabs(v));
  std::string s(buf);
  size_t dot = s.find('.');
  std::string digits = s.substr(0, dot) + s.substr(dot + 1, 2);  // scaled by 100
  std::string rest = s.substr(dot + 3);
  bool round_up = false;
  if (!rest.empty()) {
    if (rest[0] > '5') {
      round_up = true;
    } else if (rest[0] == '5') {
      round_up = true;  // exactly half (or more) rounds away from zero
    }
  }
  // integer increment on the digit string
  if (round_up) {
    int carry = 1;
    for (size_t i = digits.size(); i-- > 0 && carry;) {
      int d = digits[i] - '0' + carry;
      digits[i] = static_cast<char>('0' + d % 10);
      carry = d / 10;
    }
    if (carry) digits.insert(digits.begin(), '1');
  }
  while (digits.size() < 3) digits.insert(digits.begin(), '0');
  std::string out = digits.substr(0, digits.size() - 2) + "." + digits.substr(digits.size() - 2);
  if (v < 0 && out != "0.00") out = "-" + out;
  return out;
}

namespace {

std::string cell(const ResultTable& t, Category cat) {
  size_t ci = static_cast<size_t>(cat);
  if (t.category_counts[ci] == 0) return "-";
  return round2_half_away(t.category_means[ci]);
}

}  // namespace

std::string format_markdown(const ResultTable& t) {
  std::ostringstream out;
  out << "| Method | Overall |";
  for (Category cat : table_category_order()) out << " " << core::category_label(cat) << " |";
  out << "\n|---|---|";
  for (size_t i = 0; i < core::kCategoryCount; ++i) out << "---|";
  out << "\n| " << t.label << " | " << round2_half_away(t.overall) << " |";
  for (Category cat : table_category_order()) out << " " << cell(t, cat) << " |";
  out << "\n";
  return out.str();
}

std::string format_csv(const ResultTable& t) {
  std::ostringstream out;
  out << "Method,Overall";
  for (Category cat : table_category_order()) out << "," << core::category_label(cat);
  out << "\n" << t.label << "," << round2_half_away(t.overall);
  for (Category cat : table_category_order()) out << "," << cell(t, cat);
  out << "\n";
  return out.str();
}

}  // namespace ivedit::bench
