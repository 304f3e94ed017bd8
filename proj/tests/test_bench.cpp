// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "ivedit/adapters/mock_world.hpp"
#include "ivedit/bench/bench.hpp"
#include "ivedit/core/errors.hpp"
#include "ivedit/core/rng.hpp"

using namespace ivedit;
using namespace ivedit::bench;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Fixture {
  fs::path root;
  std::unique_ptr<pipeline::ArtifactStore> store;
  adapters::AdapterSet adapters;

  explicit Fixture(const std::string& tag, uint64_t seed = 7) {
    root = fs::temp_directory_path() / ("ivedit_bench_" + tag);
    fs::remove_all(root);
    store = std::make_unique<pipeline::ArtifactStore>(root);
    adapters = adapters::AdapterSet::desk_mocks(seed, store.get());
  }
  ~Fixture() { fs::remove_all(root); }
};

// Two tiny entries per category, with real clips in the store.
BenchManifest desk_fixture(Fixture& fx) {
  std::vector<BenchEntry> entries;
  int k = 0;
  for (auto cat : core::all_categories()) {
    for (int i = 0; i < 2; ++i) {
      auto scene = adapters::mockworld::make_scene(1000 + k, 2, 16, 16);
      auto clip = adapters::mockworld::render_scene(scene, 4, 16, 16, 8.0f);
      BenchEntry e;
      e.pair_id = std::string(core::category_name(cat)) + "-" + std::to_string(i);
      e.category = cat;
      e.source_ref = fx.store->put_clip(clip);
      e.instruction = "fixture instruction " + std::to_string(k);
      entries.push_back(std::move(e));
      ++k;
    }
  }
  return manifest_from_entries(std::move(entries));
}

}  // namespace

TEST_CASE("reference manifest: counts and total 431") {
  auto m = make_reference_manifest();
  CHECK(m.entries.size() == 431);
  int total = 0;
  for (int c : m.counts) total += c;
  CHECK(total == 431);
  CHECK(m.counts[static_cast<size_t>(core::Category::GlobalStyle)] == 58);
  CHECK(m.counts[static_cast<size_t>(core::Category::BackgroundChange)] == 59);
  CHECK(m.counts[static_cast<size_t>(core::Category::LocalChange)] == 65);
  CHECK(m.counts[static_cast<size_t>(core::Category::LocalAdd)] == 67);
  CHECK(m.counts[static_cast<size_t>(core::Category::LocalRemove)] == 59);
  CHECK(m.counts[static_cast<size_t>(core::Category::SubtitlesEdit)] == 50);
  CHECK(m.counts[static_cast<size_t>(core::Category::CameraMultiShot)] == 43);
  CHECK(m.counts[static_cast<size_t>(core::Category::CreativeEdit)] == 30);
}

TEST_CASE("manifest save/load; duplicates and bad categories rejected") {
  Fixture fx("manifest");
  auto m = desk_fixture(fx);
  CHECK(m.entries.size() == 16);
  fs::path file = fx.root / "bench.jsonl";
  save_manifest(m, file);
  auto back = load_manifest(file);
  CHECK(back.entries.size() == 16);
  CHECK(back.counts == m.counts);

  // duplicate id
  auto dup = m.entries;
  dup.push_back(dup.front());
  CHECK_THROWS_AS(manifest_from_entries(dup), core::DataError);

  // unknown category in the file
  std::string text = core::read_text_file(file);
  text += json{{"pair_id", "zz"},
               {"category", "Nonsense"},
               {"source", "clips/x"},
               {"instruction", "i"}}
              .dump() +
          "\n";
  core::write_text_file(file, text);
  CHECK_THROWS_AS(load_manifest(file), core::DataError);
}

TEST_CASE("judge prompts: substitution, scales, cap rule in all 8") {
  std::set<std::string> prompts;
  for (auto cat : core::all_categories()) {
    std::string p = build_judge_prompt(cat, "make it Ghibli style");
    prompts.insert(p);
    CHECK(p.find("make it Ghibli style") != std::string::npos);
    CHECK(p.find("<edit_prompt>") == std::string::npos);
    CHECK(p.find("1 to 5") != std::string::npos);
    CHECK(p.find("Instruction Compliance") != std::string::npos);
    CHECK(p.find("Consistency & Detail Fidelity") != std::string::npos);
    CHECK(p.find("Visual Quality & Stability") != std::string::npos);
    // the cap sentence, in either of its two template phrasings
    bool cap = p.find("should not be higher than the Instruction Compliance") !=
                   std::string::npos ||
               p.find("The second and third score should no higher than first score!!!") !=
                   std::string::npos;
    CHECK(cap);
    // deterministic
    CHECK(build_judge_prompt(cat, "make it Ghibli style") == p);
  }
  CHECK(prompts.size() == 8);  // all distinct
}

TEST_CASE("subsample: deterministic, proportions, clamped") {
  auto full = make_reference_manifest();
  auto sub = subsample(full, 30, 42);
  // 30 per category; CreativeEdit has exactly 30, so 240 in total
  CHECK(sub.entries.size() == 240);
  for (int ci = 0; ci < core::kCategoryCount; ++ci) {
    CHECK(sub.counts[static_cast<size_t>(ci)] == 30);
  }
  auto sub2 = subsample(full, 30, 42);
  for (size_t i = 0; i < sub.entries.size(); ++i) {
    CHECK(sub.entries[i].pair_id == sub2.entries[i].pair_id);
  }
  auto sub3 = subsample(full, 30, 43);
  bool differs = false;
  for (size_t i = 0; i < sub.entries.size(); ++i) {
    differs = differs || sub.entries[i].pair_id != sub3.entries[i].pair_id;
  }
  CHECK(differs);
  // n >= category count keeps whole categories
  auto all = subsample(full, 1000, 1);
  CHECK(all.entries.size() == 431);
}

TEST_CASE("evaluate_pair: identity model + scripted judges") {
  Fixture fx("eval");
  auto m = desk_fixture(fx);

  // scripted (1,1,1)
  adapters::EndpointConfig judge = fx.adapters.endpoint(adapters::Capability::Judge).config();
  judge.options = json{{"seed", 1},
                       {"policy", "script"},
                       {"script", json::array({"Brief reasoning: low.\n"
                                               "Instruction Compliance: 1\n"
                                               "Consistency & Detail Fidelity: 1\n"
                                               "Visual Quality & Stability: 1\n"})}};
  fx.adapters.add(judge, fx.store.get());
  auto row = evaluate_pair(m.entries[0], fx.adapters, *fx.store);
  REQUIRE(row.ok);
  CHECK(row.scores.compliance == 1);
  CHECK(row.mean == doctest::Approx(1.0));
  CHECK(row.edited_ref == m.entries[0].source_ref);  // identity model

  // cap-violating (3,5,2) -> stored (3,3,2) with flag
  judge.options["script"] = json::array({"Brief reasoning: capped.\n"
                                         "Instruction Compliance: 3\n"
                                         "Consistency & Detail Fidelity: 5\n"
                                         "Visual Quality & Stability: 2\n"});
  fx.adapters.add(judge, fx.store.get());
  auto row2 = evaluate_pair(m.entries[1], fx.adapters, *fx.store);
  REQUIRE(row2.ok);
  CHECK(row2.scores.compliance == 3);
  CHECK(row2.scores.consistency == 3);
  CHECK(row2.scores.quality == 2);
  CHECK(row2.scores.cap_violated);

  // judge returning garbage surfaces as a failed row, not an exception
  judge.options["script"] = json::array({"not a rating at all"});
  fx.adapters.add(judge, fx.store.get());
  auto row3 = evaluate_pair(m.entries[2], fx.adapters, *fx.store);
  CHECK_FALSE(row3.ok);
  CHECK(row3.error.find("judge response") != std::string::npos);
}

TEST_CASE("mock evaluation over the 16-entry fixture: deterministic, zero failures") {
  Fixture fx("fixture16", 99);
  auto m = desk_fixture(fx);
  std::vector<EvalRow> rows_a, rows_b;
  for (const auto& e : m.entries) rows_a.push_back(evaluate_pair(e, fx.adapters, *fx.store));
  for (const auto& e : m.entries) rows_b.push_back(evaluate_pair(e, fx.adapters, *fx.store));
  REQUIRE(rows_a.size() == 16);
  for (size_t i = 0; i < rows_a.size(); ++i) {
    CHECK(rows_a[i].ok);
    CHECK(rows_a[i].to_json() == rows_b[i].to_json());
  }
  auto table = aggregate(rows_a);
  CHECK(table.failed == 0);
  CHECK(table.overall >= 1.0);
  CHECK(table.overall <= 5.0);
}

TEST_CASE("aggregate: constants, reference-table reconciliation, micro vs macro") {
  // all rows (5,5,5) -> every cell 5.0
  std::vector<EvalRow> rows;
  for (auto cat : core::all_categories()) {
    EvalRow r;
    r.pair_id = std::string(core::category_name(cat));
    r.category = cat;
    r.ok = true;
    r.scores = {5, 5, 5, "", false};
    r.mean = 5.0;
    rows.push_back(r);
  }
  auto t = aggregate(rows);
  CHECK(t.overall == 5.0);
  for (double m : t.category_means) CHECK(m == 5.0);

  // two categories, means 1 and 5 with equal counts -> overall 3.0
  std::vector<EvalRow> two;
  for (int i = 0; i < 4; ++i) {
    EvalRow r;
    r.pair_id = "x" + std::to_string(i);
    r.category = i < 2 ? core::Category::GlobalStyle : core::Category::CreativeEdit;
    r.ok = true;
    r.mean = i < 2 ? 1.0 : 5.0;
    two.push_back(r);
  }
  CHECK(aggregate(two).overall == 3.0);

  // reconciliation against the published per-category means and counts:
  // micro-averaging gives 2.40, macro 2.33
  struct Cell {
    core::Category cat;
    double mean;
    int count;
  };
  const Cell cells[8] = {
      {core::Category::GlobalStyle, 3.11, 58},  {core::Category::BackgroundChange, 2.72, 59},
      {core::Category::LocalChange, 3.19, 65},  {core::Category::LocalRemove, 1.42, 59},
      {core::Category::LocalAdd, 2.41, 67},     {core::Category::SubtitlesEdit, 2.56, 50},
      {core::Category::CreativeEdit, 2.01, 30}, {core::Category::CameraMultiShot, 1.24, 43},
  };
  std::vector<EvalRow> table1;
  for (const auto& c : cells) {
    for (int i = 0; i < c.count; ++i) {
      EvalRow r;
      r.pair_id = std::string(core::category_name(c.cat)) + std::to_string(i);
      r.category = c.cat;
      r.ok = true;
      r.mean = c.mean;
      table1.push_back(r);
    }
  }
  auto micro = aggregate(table1, AverageMode::Micro);
  auto macro = aggregate(table1, AverageMode::Macro);
  CHECK(std::fabs(micro.overall - 2.40) < 0.01);
  CHECK(std::fabs(macro.overall - 2.33) < 0.01);
  CHECK(micro.overall >= 1.24);
  CHECK(micro.overall <= 3.19);

  // aggregation is permutation-invariant
  std::vector<EvalRow> shuffled = table1;
  core::Rng rng(5);
  for (size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1],
              shuffled[static_cast<size_t>(rng.next_int(0, static_cast<int64_t>(i) - 1))]);
  }
  CHECK(aggregate(shuffled).overall == doctest::Approx(micro.overall).epsilon(1e-12));

  CHECK_THROWS_AS(aggregate({}), core::DataError);
}

TEST_CASE("rounding: half away from zero on decimal rendering") {
  CHECK(round2_half_away(2.4049) == "2.40");
  CHECK(round2_half_away(2.405) == "2.41");
  CHECK(round2_half_away(2.404999) == "2.40");
  CHECK(round2_half_away(2.0) == "2.00");
  CHECK(round2_half_away(4.995) == "5.00");
  CHECK(round2_half_away(0.005) == "0.01");
  CHECK(round2_half_away(-2.405) == "-2.41");
  CHECK(round2_half_away(-2.4049) == "-2.40");
}

TEST_CASE("table emission: 10 columns, identical numbers in md and csv") {
  std::vector<EvalRow> rows;
  core::Rng rng(3);
  for (auto cat : core::all_categories()) {
    for (int i = 0; i < 3; ++i) {
      EvalRow r;
      r.pair_id = std::string(core::category_name(cat)) + std::to_string(i);
      r.category = cat;
      r.ok = true;
      r.mean = 1.0 + 4.0 * rng.next_double();
      rows.push_back(r);
    }
  }
  auto t = aggregate(rows, AverageMode::Micro, "fixture");
  std::string md = format_markdown(t);
  std::string csv = format_csv(t);
  // markdown header has 10 columns
  size_t pipes = 0;
  std::string header = md.substr(0, md.find('\n'));
  for (char c : header) pipes += c == '|';
  CHECK(pipes == 11);  // 10 columns need 11 separators
  // csv carries the same numbers
  std::string csv_values = csv.substr(csv.find('\n') + 1);
  std::istringstream ss(csv_values);
  std::string cell_str;
  std::getline(ss, cell_str, ',');  // label
  std::getline(ss, cell_str, ',');
  CHECK(md.find(cell_str) != std::string::npos);  // overall appears in md
  for (int i = 0; i < 8; ++i) {
    std::getline(ss, cell_str, ',');
    while (!cell_str.empty() && (cell_str.back() == '\n' || cell_str.back() == '\r')) {
      cell_str.pop_back();
    }
    CHECK(md.find(cell_str) != std::string::npos);
  }
  // column order follows the reference table order
  CHECK(csv.find("Overall,Global Style,Background Change,Local Change,Local Remove,"
                 "Local Add,Subtitle Edit,Creative Edit,Camera Edit") != std::string::npos);
}

TEST_CASE("aggregation reproduces bit-identically from persisted rows") {
  Fixture fx("rows_rt", 5);
  auto m = desk_fixture(fx);
  std::vector<EvalRow> rows;
  for (const auto& e : m.entries) rows.push_back(evaluate_pair(e, fx.adapters, *fx.store));
  std::ostringstream lines;
  for (const auto& r : rows) lines << r.to_json().dump() << "\n";
  // reload and re-aggregate
  std::vector<EvalRow> parsed;
  std::istringstream in(lines.str());
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) parsed.push_back(EvalRow::from_json(json::parse(line)));
  }
  REQUIRE(parsed.size() == rows.size());
  auto a = aggregate(rows);
  auto b = aggregate(parsed);
  CHECK(a.overall == b.overall);  // bit-identical
  for (size_t i = 0; i < a.category_means.size(); ++i) {
    CHECK(a.category_means[i] == b.category_means[i]);
  }
}

TEST_CASE("reference manifest survives file round trip at 431 entries") {
  Fixture fx("ref_rt");
  auto full = make_reference_manifest();
  fs::path file = fx.root / "reference.jsonl";
  save_manifest(full, file);
  auto back = load_manifest(file);
  CHECK(back.entries.size() == 431);
  CHECK(back.counts == full.counts);
}

TEST_CASE("shipped prompt text assets match the embedded templates byte-for-byte") {
#ifdef IVEDIT_SOURCE_DIR
  for (auto cat : core::all_categories()) {
    fs::path asset = fs::path(IVEDIT_SOURCE_DIR) / "assets" / "judge_prompts" /
                     (std::string(core::category_name(cat)) + ".txt");
    REQUIRE(fs::exists(asset));
    CHECK(core::read_text_file(asset) == judge_prompt_template(cat));
  }
#endif
}
