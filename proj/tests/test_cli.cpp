// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "ivedit/cli/cli.hpp"
#include "ivedit/core/io.hpp"
#include "ivedit/core/validate.hpp"
#include "ivedit/editnet/editor.hpp"

using namespace ivedit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempStore {
  fs::path root;
  explicit TempStore(const std::string& tag) {
    root = fs::temp_directory_path() / ("ivedit_cli_" + tag);
    fs::remove_all(root);
  }
  ~TempStore() { fs::remove_all(root); }
  std::string str() const { return root.string(); }
};

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
  CHECK(cli::run({"no-such-command"}) == 2);
  CHECK(cli::run({"pipeline", "--categories", "NotACategory", "--store",
                  (fs::temp_directory_path() / "ivedit_cli_usage").string()}) == 2);
  CHECK(cli::run({}) == 2);
  fs::remove_all(fs::temp_directory_path() / "ivedit_cli_usage");
}

TEST_CASE("cli pipeline: single category run succeeds and validates") {
  TempStore store("pipe1");
  int rc = cli::run({"pipeline", "--categories", "SubtitlesEdit,LocalAdd", "--n", "1",
                     "--seed", "3", "--store", store.str()});
  CHECK(rc == 0);
  auto pairs = core::load_pair_manifest(store.root / "pairs.jsonl");
  CHECK(pairs.size() >= 2);
  for (const auto& p : pairs) {
    CHECK((p.category == core::Category::SubtitlesEdit ||
           p.category == core::Category::LocalAdd));
    auto pair = core::load_edit_pair(p, store.root);
    CHECK(core::validate_pair(pair).empty());
  }
  CHECK(fs::exists(store.root / "retention_report.json"));
  CHECK(fs::exists(store.root / "scored.jsonl"));
  CHECK(fs::exists(store.root / "jobs.jsonl"));
}

TEST_CASE("cli train: steps=0 checkpoint equals initialization; resume continues") {
  TempStore store("train");
  REQUIRE(cli::run({"pipeline", "--categories", "GlobalStyle,LocalAdd,SubtitlesEdit", "--n",
                    "2", "--seed", "5", "--store", store.str()}) == 0);
  // steps=0: checkpoint is the untouched initialization
  REQUIRE(cli::run({"train", "--steps", "0", "--store", store.str(), "--seed", "5",
                    "--checkpoint", "init.ivar"}) == 0);
  auto init_state = editnet::load_checkpoint(store.root / "init.ivar");
  CHECK(init_state.step == 0);
  auto fresh = editnet::init_editor(init_state.cfg);
  auto na = fresh.connector_params.named();
  auto nb = init_state.connector_params.named();
  for (size_t i = 0; i < na.size(); ++i) {
    for (int64_t j = 0; j < na[i].second->value.size(); ++j) {
      CHECK(na[i].second->value[j] == nb[i].second->value[j]);
    }
  }

  // short run, then resume: the log continues from the recorded step
  REQUIRE(cli::run({"train", "--steps", "3", "--batch", "2", "--store", store.str(),
                    "--seed", "5", "--checkpoint", "a.ivar", "--log", "log.jsonl"}) == 0);
  REQUIRE(cli::run({"train", "--steps", "2", "--batch", "2", "--store", store.str(),
                    "--resume", (store.root / "a.ivar").string(), "--checkpoint", "b.ivar",
                    "--log", "log.jsonl"}) == 0);
  auto resumed = editnet::load_checkpoint(store.root / "b.ivar");
  CHECK(resumed.step == 5);
  std::istringstream log(core::read_text_file(store.root / "log.jsonl"));
  std::string line;
  std::vector<int64_t> steps;
  while (std::getline(log, line)) {
    if (!line.empty()) steps.push_back(json::parse(line).at("step").get<int64_t>());
  }
  CHECK(steps == std::vector<int64_t>{0, 1, 2, 3, 4});
}

TEST_CASE("cli stats: ratios and histograms") {
  TempStore store("stats");
  REQUIRE(cli::run({"pipeline", "--categories", "all", "--n", "1", "--seed", "11", "--store",
                    store.str()}) == 0);
  REQUIRE(cli::run({"stats", "--store", store.str()}) == 0);
  json stats = json::parse(core::read_text_file(store.root / "stats" / "stats.json"));
  double ratio_sum = 0;
  for (const auto& [cat, v] : stats.at("per_category").items()) {
    ratio_sum += v.at("ratio").get<double>();
  }
  CHECK(std::abs(ratio_sum - 1.0) < 1e-9);
  CHECK(fs::exists(store.root / "stats" / "instruction_lengths.csv"));
  CHECK(fs::exists(store.root / "stats" / "score_distribution.csv"));

  // empty manifest -> exit 1
  TempStore empty("stats_empty");
  fs::create_directories(empty.root);
  core::write_text_file(empty.root / "pairs.jsonl", "");
  CHECK(cli::run({"stats", "--store", empty.str()}) == 1);
}

TEST_CASE("cli bench: fixture manifest with mock adapters emits tables") {
  TempStore store("bench");
  REQUIRE(cli::run({"pipeline", "--categories", "all", "--n", "1", "--seed", "13", "--store",
                    store.str()}) == 0);
  // build a bench manifest out of the generated pairs (source clip + instruction)
  auto pairs = core::load_pair_manifest(store.root / "pairs.jsonl");
  std::ostringstream manifest;
  for (const auto& p : pairs) {
    manifest << json{{"pair_id", p.id},
                     {"category", std::string(core::category_name(p.category))},
                     {"source", p.source_path},
                     {"instruction", p.instruction}}
                    .dump()
             << "\n";
  }
  core::write_text_file(store.root / "bench_manifest.jsonl", manifest.str());
  REQUIRE(cli::run({"bench", "--store", store.str(), "--manifest",
                    (store.root / "bench_manifest.jsonl").string(), "--seed", "13"}) == 0);
  std::string md = core::read_text_file(store.root / "bench" / "table.md");
  CHECK(md.find("Overall") != std::string::npos);
  CHECK(md.find("Camera Edit") != std::string::npos);
  CHECK(fs::exists(store.root / "bench" / "table.csv"));
  CHECK(fs::exists(store.root / "bench" / "rows.jsonl"));

  // prompt dump writes all eight templates
  REQUIRE(cli::run({"bench", "--store", store.str(), "--dump-prompts"}) == 0);
  for (auto cat : core::all_categories()) {
    CHECK(fs::exists(store.root / "bench" /
                     (std::string(core::category_name(cat)) + "_prompt.txt")));
  }
}

TEST_CASE("cli: desk profile rejects http adapters without override") {
  TempStore store("http_guard");
  json registry{{"endpoints", json::array({json{{"capability", "judge"},
                                                {"transport", "http"},
                                                {"base_url", "http://127.0.0.1:1"}}})}};
  fs::create_directories(store.root);
  core::write_text_file(store.root / "registry.json", registry.dump());
  int rc = cli::run({"pipeline", "--n", "1", "--store", store.str(), "--registry",
                     (store.root / "registry.json").string()});
  CHECK(rc == 2);
}

TEST_CASE("cli bench: unreachable judge endpoint exits 1 with diagnostics") {
  TempStore store("bad_judge");
  fs::create_directories(store.root);
  // two-entry manifest with placeholder refs; the model endpoint is the
  // identity mock, so failures come from the judge transport
  std::ostringstream manifest;
  for (int i = 0; i < 2; ++i) {
    manifest << json{{"pair_id", "p" + std::to_string(i)},
                     {"category", "GlobalStyle"},
                     {"source", "clips/none"},
                     {"instruction", "x"}}
                    .dump()
             << "\n";
  }
  core::write_text_file(store.root / "m.jsonl", manifest.str());
  int rc = cli::run({"bench", "--store", store.str(), "--manifest",
                     (store.root / "m.jsonl").string(), "--judge-endpoint",
                     "http://127.0.0.1:1", "--allow-http", "--workers", "1"});
  CHECK(rc == 1);
}
