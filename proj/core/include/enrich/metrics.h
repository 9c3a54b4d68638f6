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

#ifndef ENRICH_METRICS_H_
#define ENRICH_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include <nlohmann/json.hpp>

namespace enrich {

// Counts with class 1 as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix Confusion(std::span<const std::uint8_t> y_true,
                          std::span<const std::uint8_t> y_pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvaluationReport {
  ClassMetrics negative;  // class 0
  ClassMetrics positive;  // class 1
  ClassMetrics macro;     // support = total
  ClassMetrics weighted;  // support = total
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  // Filled by the pipeline: config hash, seeds, params.
  nlohmann::json fingerprint = nlohmann::json::object();

  nlohmann::json ToJson() const;
};

// Zero denominators give 0.
EvaluationReport ComputeMetrics(const ConfusionMatrix& cm);

double F1Score(double precision, double recall);

}  // namespace enrich

#endif  // ENRICH_METRICS_H_
