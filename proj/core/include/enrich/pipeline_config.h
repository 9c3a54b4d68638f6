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

#ifndef ENRICH_PIPELINE_CONFIG_H_
#define ENRICH_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "enrich/augmentation.h"
#include "enrich/cross_validation.h"
#include "enrich/csv.h"
#include "enrich/frame.h"
#include "enrich/gbdt.h"

namespace enrich {

inline constexpr int kConfigSchemaVersion = 1;

enum class TaskMode { kDetect, kPredict };

struct TaskConfig {
  TaskMode mode = TaskMode::kDetect;
  int shift = 0;  // predict only
};

enum class ImputationMethod { kNone, kZero, kRolling };

struct ImputationConfig {
  ImputationMethod method = ImputationMethod::kNone;
  int window = 5;
};

enum class SamplingMethod { kNone, kSmote, kTomek, kEnn, kAdasyn, kSmoteTomek, kSmoteEnn };

std::string_view ToString(SamplingMethod method);
std::optional<SamplingMethod> ParseSamplingMethod(std::string_view name);

struct SamplingConfig {
  SamplingMethod method = SamplingMethod::kNone;
  double target_ratio = 1.0;
  int k = 5;
  int k_enn = 3;
  double beta = 1.0;
};

struct SplitConfig {
  SplitMethod method = SplitMethod::kRandom;
  double test_fraction = 0.3;   // random
  bool stratified = true;       // random
  double train_fraction = 0.8;  // time, and per session for run
  double gap_minutes = 30.0;    // run
};

struct ModelConfig {
  GbdtParams params;
  std::optional<ParamGrid> grid;
  bool default_grid = false;  // grid derived from the training class ratio
  CvSpec cv;
};

struct PipelineConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name;  // run id; derived from the config hash when empty
  std::filesystem::path dataset_path;
  CsvSchema schema;
  TaskConfig task;
  ImputationConfig imputation;
  AugmentationSpec augmentation;
  bool augmentation_seed_set = false;
  SamplingConfig sampling;
  SplitConfig split;
  std::optional<std::size_t> top_features;
  ModelConfig model;
  std::filesystem::path report_dir = "reports";
  std::uint64_t seed = 0;
};

// Validates a config document, collecting every violation with its key path
// before throwing ConfigError. Relative dataset paths resolve against
// `base_dir`.
PipelineConfig ParseConfig(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                           bool check_files = true);
PipelineConfig LoadConfig(const std::filesystem::path& path);

// Normalized form with every default filled in. Parsing it back yields an
// equal config.
nlohmann::json ToJson(const PipelineConfig& config);

// Reads a JSON file, reporting syntax errors as ConfigError.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);

}  // namespace enrich

#endif  // ENRICH_PIPELINE_CONFIG_H_
