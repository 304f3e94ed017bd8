// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/cli/cli.hpp"

#include <atomic>
#include <csignal>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ivedit/bench/bench.hpp"
#include "ivedit/core/errors.hpp"
#include "ivedit/core/rng.hpp"
#include "ivedit/core/text.hpp"
#include "ivedit/editnet/editor.hpp"
#include "ivedit/filtering/stats.hpp"
#include "ivedit/pipeline/orchestrator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ivedit::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::atomic<bool> g_interrupted{false};

void handle_signal(int) { g_interrupted.store(true); }

struct CommonOptions {
  std::string store_path = "ivedit_store";
  uint64_t seed = 7;
  int workers = 2;
  std::string registry_path;
  std::string profile = "desk";
  bool allow_http = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--store", opts.store_path, "Artifact store root directory");
  cmd->add_option("--seed", opts.seed, "Root seed for all derived randomness");
  cmd->add_option("--workers", opts.workers, "Worker thread count")->check(CLI::Range(1, 64));
  cmd->add_option("--registry", opts.registry_path,
                  "Adapter registry JSON (defaults to deterministic in-process mocks)");
  cmd->add_option("--profile", opts.profile, "Scale profile")
      ->check(CLI::IsMember({"desk", "full"}));
  cmd->add_flag("--allow-http", opts.allow_http,
                "Permit http adapters under the desk profile");
}

adapters::AdapterSet make_adapters(const CommonOptions& opts, pipeline::ArtifactStore* store) {
  adapters::AdapterSet set;
  if (opts.registry_path.empty()) {
    set = adapters::AdapterSet::desk_mocks(opts.seed, store);
  } else {
    set = adapters::AdapterSet::from_registry(
        json::parse(core::read_text_file(opts.registry_path)), store);
  }
  if (opts.profile == "desk" && set.any_http() && !opts.allow_http) {
    throw core::ConfigError(
        "desk profile forbids http adapters; pass --allow-http to override");
  }
  return set;
}

std::vector<core::Category> parse_categories(const std::string& spec) {
  std::vector<core::Category> cats;
  if (spec == "all" || spec.empty()) return cats;
  std::istringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    auto cat = core::parse_category(core::trim(token));
    if (!cat) {
      throw CLI::ValidationError("--categories", "unknown category '" + token + "'");
    }
    cats.push_back(*cat);
  }
  return cats;
}

// ---- pipeline -------------------------------------------------------------

struct PipelineArgs {
  CommonOptions common;
  std::string categories = "all";
  int n_clips = 2;
};

int cmd_pipeline(const PipelineArgs& args) {
  pipeline::PipelineConfig cfg;
  cfg.categories = parse_categories(args.categories);
  cfg.n_clips = args.n_clips;
  cfg.seed = args.common.seed;
  cfg.workers = args.common.workers;
  cfg.interrupt = &g_interrupted;
  if (args.common.profile == "full") {
    // full-scale geometry: 720p-class clips and the 65..129 frame window
    cfg.clip_t = 65;
    cfg.clip_h = 720;
    cfg.clip_w = 1280;
    cfg.window_slack = 64;
  }
  pipeline::ArtifactStore store(args.common.store_path);
  auto adapters = make_adapters(args.common, &store);
  auto result = pipeline::run_pipeline(cfg, adapters, store);

  std::cout << "pipeline: " << result.total_pairs << " pairs generated, "
            << result.retained_pairs << " retained\n"
            << "manifest: " << result.manifest_path.string() << "\n"
            << "report:   " << result.report_path.string() << "\n";
  if (result.failed_jobs > 0) {
    std::cerr << "pipeline: " << result.failed_jobs << " job(s) failed\n";
    for (const auto& job : result.jobs) {
      if (job.status == pipeline::JobStatus::Failed) {
        std::cerr << "  " << job.id << " (step " << job.failed_step << "): " << job.error
                  << "\n";
      }
    }
    return kExitFailure;
  }
  if (result.interrupted) {
    std::cerr << "pipeline: interrupted, partial manifests flushed\n";
    return kExitFailure;
  }
  return kExitOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  CommonOptions common;
  std::string manifest;
  std::string checkpoint = "checkpoint.ivar";
  std::string resume;
  std::string log_path = "train_log.jsonl";
  int steps = 200;
  int batch = 4;
  double lr = 1e-3;
};

int cmd_train(const TrainArgs& args) {
  pipeline::ArtifactStore store(args.common.store_path);
  fs::path manifest =
      args.manifest.empty() ? store.root() / "pairs.jsonl" : fs::path(args.manifest);
  auto entries = core::load_pair_manifest(manifest);
  if (entries.empty()) {
    std::cerr << "train: manifest " << manifest << " is empty\n";
    return kExitFailure;
  }

  editnet::EditorState state;
  if (!args.resume.empty()) {
    state = editnet::load_checkpoint(args.resume);
  } else {
    editnet::EditorConfig cfg = editnet::EditorConfig::desk_default();
    cfg.seed = args.common.seed;
    cfg.lr = args.lr;
    state = editnet::init_editor(cfg);
  }

  // Use only pairs matching the model geometry (SA pairs at desk scale).
  std::vector<editnet::TrainSample> samples;
  for (const auto& e : entries) {
    core::EditPair pair = core::load_edit_pair(e, manifest.parent_path());
    if (pair.source.t != state.cfg.clip_t || pair.source.h != state.cfg.clip_h ||
        pair.source.w != state.cfg.clip_w || !pair.source.same_geometry(pair.target)) {
      continue;
    }
    samples.push_back(editnet::make_train_sample(pair, state.cfg));
  }
  if (samples.empty()) {
    std::cerr << "train: no pairs match the model geometry (" << state.cfg.clip_t << "x"
              << state.cfg.clip_h << "x" << state.cfg.clip_w << ")\n";
    return kExitFailure;
  }
  std::cout << "train: " << samples.size() << " usable pairs, " << args.steps << " steps\n";

  std::ostringstream log;
  fs::path log_file = store.root() / args.log_path;
  if (!args.resume.empty() && fs::exists(log_file)) {
    log << core::read_text_file(log_file);  // continue the log
  }
  try {
    for (int step = 0; step < args.steps; ++step) {
      if (g_interrupted.load()) break;
      // deterministic batch selection per global step
      core::Rng rng(core::mix64(state.cfg.seed,
                                core::mix64(core::fnv1a64("batch"),
                                            static_cast<uint64_t>(state.step))));
      std::vector<editnet::TrainSample> batch;
      for (int b = 0; b < args.batch; ++b) {
        batch.push_back(
            samples[static_cast<size_t>(rng.next_int(0, static_cast<int64_t>(samples.size()) - 1))]);
      }
      int64_t step_no = state.step;  // the step about to run
      auto stats = editnet::training_step(batch, state);
      json hist = json::array();
      for (auto v : stats.expert_histogram) hist.push_back(v);
      log << json{{"step", step_no},
                  {"loss", stats.loss},
                  {"lr", state.optimizer->lr()},
                  {"expert_histogram", hist}}
                 .dump()
          << "\n";
      if (step_no % 50 == 0 || step + 1 == args.steps) {
        std::cout << "step " << step_no << " loss " << stats.loss << "\n";
      }
    }
  } catch (const core::DataError& e) {
    std::cerr << "train: " << e.what() << "\n";
    core::write_text_file_atomic(log_file, log.str());
    return kExitFailure;
  }
  core::write_text_file_atomic(log_file, log.str());
  fs::path ckpt = store.root() / args.checkpoint;
  editnet::save_checkpoint(state, ckpt);
  std::cout << "checkpoint: " << ckpt.string() << "\n"
            << "log:        " << log_file.string() << "\n";
  return kExitOk;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  CommonOptions common;
  std::string manifest;
  std::string out_dir = "bench";
  std::string model_endpoint;
  std::string judge_endpoint;
  std::string average = "micro";
  std::string label = "model";
  int subsample_n = 0;
  uint64_t subsample_seed = 17;
  bool dump_prompts = false;
};

int cmd_bench(const BenchArgs& args) {
  pipeline::ArtifactStore store(args.common.store_path);
  fs::path out_dir = store.root() / args.out_dir;
  fs::create_directories(out_dir);

  if (args.dump_prompts) {
    for (auto cat : core::all_categories()) {
      core::write_text_file(out_dir / (std::string(core::category_name(cat)) + "_prompt.txt"),
                            bench::judge_prompt_template(cat));
    }
    std::cout << "prompts written to " << out_dir.string() << "\n";
    if (args.manifest.empty()) return kExitOk;
  }

  auto adapters = make_adapters(args.common, &store);
  for (auto [cap, url] :
       {std::pair{adapters::Capability::EditModelUnderTest, args.model_endpoint},
        std::pair{adapters::Capability::Judge, args.judge_endpoint}}) {
    if (url.empty()) continue;
    adapters::EndpointConfig cfg;
    cfg.capability = cap;
    cfg.transport = adapters::EndpointConfig::Transport::Http;
    cfg.base_url = url;
    if (args.common.profile == "desk" && !args.common.allow_http) {
      std::cerr << "bench: desk profile forbids http endpoints (use --allow-http)\n";
      return kExitUsage;
    }
    adapters.add(cfg, &store);
  }

  auto manifest = bench::load_manifest(args.manifest);
  if (args.subsample_n > 0) {
    manifest = bench::subsample(manifest, args.subsample_n, args.subsample_seed);
  }
  std::cout << "bench: evaluating " << manifest.entries.size() << " pairs\n";

  std::vector<bench::EvalRow> rows(manifest.entries.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= rows.size() || g_interrupted.load()) return;
      rows[i] = bench::evaluate_pair(manifest.entries[i], adapters, store);
    }
  };
  std::vector<std::thread> threads;
  for (int t = 1; t < args.common.workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::ostringstream lines;
  for (const auto& r : rows) lines << r.to_json().dump() << "\n";
  core::write_text_file_atomic(out_dir / "rows.jsonl", lines.str());

  try {
    auto mode = args.average == "macro" ? bench::AverageMode::Macro : bench::AverageMode::Micro;
    auto table = bench::aggregate(rows, mode, args.label);
    core::write_text_file_atomic(out_dir / "table.md", bench::format_markdown(table));
    core::write_text_file_atomic(out_dir / "table.csv", bench::format_csv(table));
    std::cout << bench::format_markdown(table);
    if (table.failed > 0) {
      std::cerr << "bench: " << table.failed << " pair(s) failed and were excluded\n";
    }
  } catch (const core::DataError& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

// ---- stats ----------------------------------------------------------------

struct StatsArgs {
  CommonOptions common;
  std::string manifest;
  std::string out_dir = "stats";
};

int cmd_stats(const StatsArgs& args) {
  pipeline::ArtifactStore store(args.common.store_path);
  fs::path manifest =
      args.manifest.empty() ? store.root() / "pairs.jsonl" : fs::path(args.manifest);
  auto pairs = core::load_pair_manifest(manifest);
  if (pairs.empty()) {
    std::cerr << "stats: manifest " << manifest << " is empty\n";
    return kExitFailure;
  }
  fs::path out_dir = store.root() / args.out_dir;
  fs::create_directories(out_dir);
  auto stats = filtering::compute_dataset_stats(pairs);
  core::write_text_file_atomic(out_dir / "stats.json", stats.to_json().dump(2) + "\n");

  // plot-ready histogram of instruction word counts
  std::map<int, int64_t> words;
  for (const auto& p : pairs) ++words[core::word_count(p.instruction)];
  std::ostringstream wcsv;
  wcsv << "words,count\n";
  for (const auto& [w, c] : words) wcsv << w << "," << c << "\n";
  core::write_text_file_atomic(out_dir / "instruction_lengths.csv", wcsv.str());

  // score distribution, when a scored manifest sits next to the pairs
  fs::path scored = manifest.parent_path() / "scored.jsonl";
  if (fs::exists(scored)) {
    std::map<int, int64_t> dist;
    std::istringstream in(core::read_text_file(scored));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto sp = filtering::parse_scored_manifest_line(line);
      ++dist[sp.scores.compliance];
    }
    std::ostringstream scsv;
    scsv << "compliance,count\n";
    for (const auto& [s, c] : dist) scsv << s << "," << c << "\n";
    core::write_text_file_atomic(out_dir / "score_distribution.csv", scsv.str());
  }
  std::cout << "stats: " << stats.total << " pairs, mean instruction length "
            << stats.mean_instruction_words << " words\n"
            << "stats written to " << out_dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Desk-scale instruction-guided video editing stack"};
  app.require_subcommand(1);
  app.set_config("--config")->envname("IVEDIT_CONFIG");

  PipelineArgs pipeline_args;
  auto* pipeline_cmd = app.add_subcommand(
      "pipeline", "Run the three-stage data construction pipeline");
  add_common(pipeline_cmd, pipeline_args.common);
  pipeline_cmd->add_option("--categories", pipeline_args.categories,
                           "Comma-separated category names, or 'all'");
  pipeline_cmd->add_option("--n", pipeline_args.n_clips, "Clips per category")
      ->check(CLI::Range(1, 1000));

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train the toy editor on a pair manifest");
  add_common(train_cmd, train_args.common);
  train_cmd->add_option("--manifest", train_args.manifest, "Pair manifest (JSON Lines)");
  train_cmd->add_option("--steps", train_args.steps, "Optimizer steps")
      ->check(CLI::Range(0, 1000000));
  train_cmd->add_option("--batch", train_args.batch, "Batch size")->check(CLI::Range(1, 256));
  train_cmd->add_option("--lr", train_args.lr, "Learning rate");
  train_cmd->add_option("--checkpoint", train_args.checkpoint,
                        "Checkpoint file name (under the store)");
  train_cmd->add_option("--resume", train_args.resume, "Checkpoint to resume from");
  train_cmd->add_option("--log", train_args.log_path, "Training log file name");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Evaluate a model on a benchmark manifest");
  add_common(bench_cmd, bench_args.common);
  bench_cmd->add_option("--manifest", bench_args.manifest, "Benchmark manifest (JSON Lines)");
  bench_cmd->add_option("--out-dir", bench_args.out_dir, "Output directory under the store");
  bench_cmd->add_option("--model-endpoint", bench_args.model_endpoint,
                        "HTTP endpoint for the model under test");
  bench_cmd->add_option("--judge-endpoint", bench_args.judge_endpoint,
                        "HTTP endpoint for the judge");
  bench_cmd->add_option("--subsample", bench_args.subsample_n,
                        "Evaluate only n pairs per category (0 = all)");
  bench_cmd->add_option("--subsample-seed", bench_args.subsample_seed, "Subsampling seed");
  bench_cmd->add_option("--average", bench_args.average, "Overall averaging mode")
      ->check(CLI::IsMember({"micro", "macro"}));
  bench_cmd->add_option("--label", bench_args.label, "Row label for emitted tables");
  bench_cmd->add_flag("--dump-prompts", bench_args.dump_prompts,
                      "Write the judge prompt templates as text files");

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics for a pair manifest");
  add_common(stats_cmd, stats_args.common);
  stats_cmd->add_option("--manifest", stats_args.manifest, "Pair manifest (JSON Lines)");
  stats_cmd->add_option("--out-dir", stats_args.out_dir, "Output directory under the store");

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (pipeline_cmd->parsed()) return cmd_pipeline(pipeline_args);
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (bench_cmd->parsed()) return cmd_bench(bench_args);
    if (stats_cmd->parsed()) return cmd_stats(stats_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const core::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const core::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("ivedit");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ivedit::cli
