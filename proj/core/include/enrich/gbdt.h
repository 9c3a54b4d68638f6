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

#ifndef ENRICH_GBDT_H_
#define ENRICH_GBDT_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "enrich/feature_matrix.h"

namespace enrich {

struct GbdtParams {
  int n_rounds = 100;
  int max_depth = 3;
  double learning_rate = 0.3;
  double lambda = 1.0;
  double alpha = 0.0;
  double subsample = 1.0;
  double scale_pos_weight = 1.0;
  double min_child_hessian = 1.0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument naming every out-of-range field.
  void Validate() const;
  nlohmann::json ToJson() const;
  static GbdtParams FromJson(const nlohmann::json& j);
};

bool operator==(const GbdtParams& a, const GbdtParams& b);

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // rows with x < threshold go left
  int left = -1;
  int right = -1;
  double cover = 0.0;  // hessian mass routed through the node
  double weight = 0.0;  // leaf output
  double gain = 0.0;

  bool is_leaf() const { return left < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double Predict(std::span<const double> row) const;
};

class GbdtModel {
 public:
  double base_score = 0.0;  // log-odds prior
  double learning_rate = 0.3;
  std::vector<std::string> feature_names;
  std::vector<Tree> trees;
  GbdtParams params;

  // base_score + learning_rate * sum of the first `tree_limit` tree outputs.
  double PredictMargin(std::span<const double> row,
                       std::size_t tree_limit = std::numeric_limits<std::size_t>::max()) const;
  std::vector<double> PredictProba(const FeatureMatrix& x) const;

  nlohmann::json ToJson() const;
  static GbdtModel FromJson(const nlohmann::json& j);
  // Stable text form; equal models serialize to equal bytes.
  std::string Serialize() const;
};

// Weighted second-order boosting on the logistic loss. Positive rows carry
// weight scale_pos_weight.
GbdtModel TrainGbdt(const FeatureMatrix& x, const GbdtParams& params);

std::vector<std::uint8_t> PredictLabel(std::span<const double> probs, double threshold = 0.5);

double Sigmoid(double margin);

struct LossDerivatives {
  double gradient = 0.0;
  double hessian = 0.0;
};

// Weighted log-loss of one row as a function of its margin, and its first and
// second derivatives.
double WeightedLogLoss(std::uint8_t y, double margin, double weight);
LossDerivatives LogLossDerivatives(std::uint8_t y, double margin, double weight);

// Mean weighted log-loss of the model truncated to `tree_limit` trees.
double TrainingLogLoss(const GbdtModel& model, const FeatureMatrix& x,
                       std::size_t tree_limit = std::numeric_limits<std::size_t>::max());

struct FeatureImportance {
  std::string feature;
  std::size_t index = 0;
  double total_cover = 0.0;
  std::size_t split_count = 0;
};

// Every feature, by descending total cover then ascending index.
std::vector<FeatureImportance> TotalCoverImportance(const GbdtModel& model);

}  // namespace enrich

#endif  // ENRICH_GBDT_H_
