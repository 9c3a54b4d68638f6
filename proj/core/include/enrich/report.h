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

#ifndef ENRICH_REPORT_H_
#define ENRICH_REPORT_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "enrich/metrics.h"

namespace enrich {

// Metrics as rows, pipelines as columns. `bold` marks every cell equal to its
// row maximum.
struct ComparisonTable {
  struct Row {
    std::string metric;
    std::vector<double> values;
    std::vector<bool> bold;
  };

  std::vector<std::string> labels;
  std::vector<Row> rows;
  // Per column, "total (negatives+positives)".
  std::vector<std::string> support;

  std::string ToCsv() const;
  nlohmann::json ToJson() const;
};

ComparisonTable CompareReports(
    const std::vector<std::pair<std::string, EvaluationReport>>& reports);

// Writes through a temporary file in the same directory and renames it into
// place.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace enrich

#endif  // ENRICH_REPORT_H_
