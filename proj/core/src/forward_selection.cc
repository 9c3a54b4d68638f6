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

#include "enrich/forward_selection.h"

#include <algorithm>

#include "enrich/cross_validation.h"
#include "enrich/error.h"
#include "enrich/feature_matrix.h"

namespace enrich {
namespace {

double Evaluate(const LabeledDataset& train, const LabeledDataset& validation,
                const std::vector<FamilySpec>& families, const GbdtParams& params,
                std::uint64_t seed) {
  AugmentationSpec spec{families, seed};
  const AugmentationState state = FitAugmentationState(train.frame());
  const LabeledDataset tr = AugmentFrame(train, spec, &state);
  const LabeledDataset va = AugmentFrame(validation, spec, &state);
  const GbdtModel model = TrainGbdt(FeatureMatrix::FromDataset(tr), params);
  const FeatureMatrix vx = FeatureMatrix::FromDataset(va);
  return ScorePredictions(Scoring::kMacroF1, vx.labels(), PredictLabel(model.PredictProba(vx)));
}

}  // namespace

ForwardSelectionResult ForwardSelectAugmentations(const LabeledDataset& train,
                                                  const LabeledDataset& validation,
                                                  const std::vector<FamilySpec>& families,
                                                  const GbdtParams& params, double epsilon,
                                                  std::uint64_t seed) {
  if (families.empty()) throw InvalidArgument("forward selection needs at least one family");
  if (validation.positive_count() == 0 || validation.negative_count() == 0) {
    throw InvalidArgument("forward selection validation set must contain both classes");
  }
  ForwardSelectionResult result;
  std::vector<FamilySpec> adopted;
  result.baseline_score = Evaluate(train, validation, adopted, params, seed);
  result.path_scores.push_back(result.baseline_score);
  std::vector<std::size_t> remaining(families.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

  for (int step = 0; !remaining.empty(); ++step) {
    const double current = result.path_scores.back();
    const std::size_t first = result.trace.size();
    std::size_t best_slot = 0;
    double best_score = -1.0;
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      std::vector<FamilySpec> trial = adopted;
      trial.push_back(families[remaining[r]]);
      const double score = Evaluate(train, validation, trial, params, seed);
      result.trace.push_back({step, remaining[r], score, score - current, false});
      if (score > best_score) {
        best_score = score;
        best_slot = r;
      }
    }
    if (!(best_score - current > epsilon)) break;
    result.trace[first + best_slot].adopted = true;
    result.selected.push_back(remaining[best_slot]);
    adopted.push_back(families[remaining[best_slot]]);
    result.path_scores.push_back(best_score);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_slot));
  }
  return result;
}

}  // namespace enrich
