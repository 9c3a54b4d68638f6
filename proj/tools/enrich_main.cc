/*
 * Copyright 2026 The Enrich Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: run, grid, importance and synth.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "enrich/csv.h"
#include "enrich/error.h"
#include "enrich/pipeline.h"
#include "enrich/pipeline_config.h"
#include "enrich/random.h"
#include "enrich/report.h"
#include "enrich/synthetic.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out;
};

enrich::RunOptions Options(const GlobalFlags& g) {
  enrich::RunOptions o;
  o.workers = g.workers;
  if (!g.out.empty()) o.out_dir = g.out;
  return o;
}

enrich::PipelineConfig Load(const std::string& path, const GlobalFlags& g) {
  enrich::PipelineConfig c = enrich::LoadConfig(path);
  if (g.seed) c.seed = *g.seed;
  return c;
}

void PrintSummary(const enrich::PipelineResult& r) {
  const auto& m = r.report;
  std::cout << "run " << r.run_id << " -> " << r.run_dir.string() << "\n"
            << "  macro    P=" << m.macro.precision << " R=" << m.macro.recall << " F1=" << m.macro.f1 << "\n"
            << "  weighted P=" << m.weighted.precision << " R=" << m.weighted.recall
            << " F1=" << m.weighted.f1 << "\n"
            << "  accuracy=" << m.accuracy << " support=" << m.confusion.total() << " ("
            << m.negative.support << "+" << m.positive.support << ")\n";
}

int CmdRun(const std::string& config, const GlobalFlags& g) {
  const auto result = enrich::RunPipeline(Load(config, g), Options(g));
  PrintSummary(result);
  return kExitOk;
}

int CmdGrid(const std::string& grid_path, const GlobalFlags& g) {
  enrich::ExperimentGrid grid = enrich::LoadGrid(grid_path);
  if (g.seed) {
    for (auto& v : grid.variants) v.config["seed"] = *g.seed;
  }
  const auto result = enrich::RunExperimentGrid(grid, Options(g), &std::cerr);
  std::cout << "grid: " << grid.variants.size() << " variants, " << result.executed.size()
            << " run, " << result.skipped.size() << " resumed\n"
            << "table: " << (result.out_dir / "table.csv").string() << "\n"
            << result.table.ToCsv();
  return kExitOk;
}

int CmdImportance(const std::string& config, std::size_t top, const GlobalFlags& g) {
  const auto result = enrich::RunPipeline(Load(config, g), Options(g));
  std::ostringstream csv;
  csv << "rank,feature,total_cover,split_count\n";
  const std::size_t n = std::min(top, result.importance.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = result.importance[i];
    csv << i + 1 << ',' << f.feature << ',' << f.total_cover << ',' << f.split_count << '\n';
  }
  enrich::WriteFileAtomic(result.run_dir / "importance.csv", csv.str());
  std::cout << csv.str();
  return kExitOk;
}

struct SynthFlags {
  std::string kind = "vibration";
  std::string output;
  double rarity = 0.005;
  std::size_t rows = 20000;
  std::size_t events = 100;
  int lead = 2;
  double nulls = 0.0;
  std::uint64_t seed = 0;
};

int CmdSynth(const SynthFlags& s, const GlobalFlags& g) {
  const std::uint64_t seed = g.seed.value_or(s.seed);
  enrich::LabeledDataset ds;
  if (s.kind == "vibration") {
    ds = enrich::VibrationDataset(s.rarity, s.rows, seed);
  } else if (s.kind == "leading") {
    ds = enrich::LeadingSignatureDataset(s.rows, s.events, s.lead, seed);
  } else {
    throw enrich::ConfigError({"--kind: must be vibration or leading"});
  }
  if (s.nulls > 0.0) ds = ds.WithFrame(enrich::InjectNulls(ds.frame(), s.nulls, enrich::DeriveSeed(seed, 99)));
  enrich::SaveCsv(ds, s.output);
  std::cout << "wrote " << ds.length() << " rows (" << ds.positive_count() << " positive) to "
            << s.output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data enrichment pipelines for rare-event detection and prediction"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--seed", g.seed, "Override the global seed");
  app.add_option("--workers", g.workers, "Parallel workers")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Report output directory");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one pipeline config");
  run->add_option("config", config_path, "Pipeline config (JSON)")->required();
  run->fallthrough();

  std::string grid_path;
  auto* grid = app.add_subcommand("grid", "Run an experiment grid");
  grid->add_option("grid", grid_path, "Grid config (JSON)")->required();
  grid->fallthrough();

  std::size_t top = 20;
  auto* imp = app.add_subcommand("importance", "Rank features by total cover");
  imp->add_option("config", config_path, "Pipeline config (JSON)")->required();
  imp->add_option("--top", top, "Number of features to list");
  imp->fallthrough();

  SynthFlags synth;
  auto* syn = app.add_subcommand("synth", "Write a synthetic dataset CSV");
  syn->add_option("--kind", synth.kind, "vibration or leading");
  syn->add_option("-o,--output", synth.output, "Output CSV")->required();
  syn->add_option("--rarity", synth.rarity, "Positive share (vibration)");
  syn->add_option("--rows", synth.rows, "Row count");
  syn->add_option("--events", synth.events, "Event count (leading)");
  syn->add_option("--lead", synth.lead, "Signature lead in rows (leading)");
  syn->add_option("--nulls", synth.nulls, "Share of predictor cells to null");
  syn->add_option("--data-seed", synth.seed, "Generator seed");
  syn->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return CmdRun(config_path, g);
    if (grid->parsed()) return CmdGrid(grid_path, g);
    if (imp->parsed()) return CmdImportance(config_path, top, g);
    if (syn->parsed()) return CmdSynth(synth, g);
  } catch (const enrich::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
