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

#ifndef ENRICH_CROSS_VALIDATION_H_
#define ENRICH_CROSS_VALIDATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enrich/feature_matrix.h"
#include "enrich/frame.h"
#include "enrich/gbdt.h"

namespace enrich {

enum class Scoring { kMacroF1, kRecallPos, kPrecisionPos };

std::string_view ToString(Scoring scoring);
std::optional<Scoring> ParseScoring(std::string_view name);

struct CvSpec {
  int k = 5;
  int repeats = 3;
  std::uint64_t seed = 0;
  Scoring scoring = Scoring::kMacroF1;
};

struct Fold {
  int repeat = 0;
  int fold = 0;
  std::vector<std::size_t> train;       // ascending
  std::vector<std::size_t> validation;  // ascending
};

// k * repeats folds, repeat-major. Within a repeat each class is shuffled and
// dealt round-robin so per-fold class counts differ by at most one.
std::vector<Fold> RepeatedStratifiedKFold(std::span<const std::uint8_t> y, const CvSpec& spec);

double ScorePredictions(Scoring scoring, std::span<const std::uint8_t> y_true,
                        std::span<const std::uint8_t> y_pred);

// Parameter name -> candidate values. Names: n_rounds, max_depth,
// learning_rate, lambda, alpha, subsample, scale_pos_weight,
// min_child_hessian.
using ParamGrid = std::map<std::string, std::vector<double>>;

// Cartesian product in key order, last key varying fastest. Unset fields
// come from `base`. Throws on unknown names or empty value lists.
std::vector<GbdtParams> ExpandGrid(const ParamGrid& grid, const GbdtParams& base = {});

// rho = negatives / positives.
ParamGrid DefaultGrid(double rho);

struct CvScore {
  std::size_t candidate = 0;
  int repeat = 0;
  int fold = 0;
  double score = 0.0;
};

struct GridSearchResult {
  GbdtParams best;
  std::size_t best_index = 0;
  std::vector<GbdtParams> candidates;
  std::vector<double> mean_scores;
  std::vector<CvScore> table;  // candidates x k x repeats rows
};

// Applied to each training fold before fitting; the validation fold is never
// resampled.
using FoldResampler = std::function<FeatureMatrix(const FeatureMatrix& train, std::uint64_t seed)>;

// Ties on mean score go to the smaller scale_pos_weight, then the smaller
// n_rounds, then the earlier candidate.
GridSearchResult GridSearch(const FeatureMatrix& x, const ParamGrid& grid, const CvSpec& cv,
                            const GbdtParams& base = {}, const FoldResampler& resampler = {},
                            int workers = 1);

// Keeps the m feature columns with the largest total cover summed over the
// CV fold models, in their original order.
LabeledDataset SelectTopFeatures(const LabeledDataset& ds, std::size_t m, const GbdtParams& params,
                                 const CvSpec& cv);

}  // namespace enrich

#endif  // ENRICH_CROSS_VALIDATION_H_
