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

#ifndef ENRICH_PIPELINE_H_
#define ENRICH_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "enrich/frame.h"
#include "enrich/gbdt.h"
#include "enrich/metrics.h"
#include "enrich/pipeline_config.h"
#include "enrich/report.h"

namespace enrich {

// Per-stage seeds are DeriveSeed(config.seed, id).
enum class StageSeed : std::uint64_t {
  kSplit = 1,
  kAugment = 2,
  kSampling = 3,
  kModel = 4,
  kCv = 5,
  kFeatureSelection = 6,
};

std::uint64_t StageSeedFor(std::uint64_t global_seed, StageSeed stage);

// Stage names in execution order.
inline constexpr const char* kStageOrder[] = {"load",    "impute",   "curve_shift",
                                              "split",   "select",   "augment",
                                              "resample", "train",   "evaluate"};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides config.report_dir
  int workers = 1;
  bool write_files = true;
};

struct SessionResult {
  std::string label;
  EvaluationReport report;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
};

struct PipelineResult {
  std::string run_id;
  std::filesystem::path run_dir;
  EvaluationReport report;            // pooled over sessions for run splits
  std::vector<SessionResult> sessions;  // run splits only
  GbdtModel model;
  std::vector<FeatureImportance> importance;
  nlohmann::json report_json;
};

// Runs every stage on the configured CSV, or on `preloaded` when given.
// Stage failures surface as StageError.
PipelineResult RunPipeline(const PipelineConfig& config, const RunOptions& options = {},
                           const LabeledDataset* preloaded = nullptr);

// Hash of the normalized config, excluding the report directory.
std::string ConfigHash(const PipelineConfig& config);

// report.json with the created_at field removed.
nlohmann::json StripVolatile(nlohmann::json report);

struct GridVariant {
  std::string label;
  nlohmann::json config;  // base with the variant's overrides merged in
};

struct ExperimentGrid {
  std::vector<std::string> axes;
  std::vector<GridVariant> variants;  // cross product, first axis varying slowest
  std::filesystem::path base_dir;
  std::filesystem::path report_dir;
};

// Validates the grid and every variant config; throws ConfigError listing all
// problems.
ExperimentGrid ParseGrid(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentGrid LoadGrid(const std::filesystem::path& path);

struct GridRunResult {
  ComparisonTable table;
  std::vector<std::string> executed;
  std::vector<std::string> skipped;  // already reported
  std::filesystem::path out_dir;
};

// Runs every variant whose report.json is missing, up to options.workers at
// a time, then writes table.csv and table.json for all variants.
GridRunResult RunExperimentGrid(const ExperimentGrid& grid, const RunOptions& options,
                                std::ostream* log = nullptr);

// Rebuilds the evaluation report stored in a report.json document.
EvaluationReport ReportFromJson(const nlohmann::json& report_json);

}  // namespace enrich

#endif  // ENRICH_PIPELINE_H_
