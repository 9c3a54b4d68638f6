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

#ifndef ENRICH_FORWARD_SELECTION_H_
#define ENRICH_FORWARD_SELECTION_H_

#include <cstdint>
#include <vector>

#include "enrich/augmentation.h"
#include "enrich/frame.h"
#include "enrich/gbdt.h"

namespace enrich {

struct SelectionCandidate {
  int step = 0;
  std::size_t family = 0;  // index into the caller's family list
  double score = 0.0;      // validation macro-F1 with the family added
  double gain = 0.0;       // over the score adopted at the previous step
  bool adopted = false;
};

struct ForwardSelectionResult {
  std::vector<std::size_t> selected;  // indices into the caller's list, in adoption order
  double baseline_score = 0.0;        // raw features only
  std::vector<double> path_scores;    // baseline, then after each adoption
  std::vector<SelectionCandidate> trace;
};

// Greedy family-level forward selection. Each step tries every remaining
// family on top of the adopted ones and adopts the best if its gain exceeds
// epsilon; equal scores go to the earlier family. Validation rows are
// augmented with statistics fitted on the training rows.
ForwardSelectionResult ForwardSelectAugmentations(const LabeledDataset& train,
                                                  const LabeledDataset& validation,
                                                  const std::vector<FamilySpec>& families,
                                                  const GbdtParams& params,
                                                  double epsilon = 0.001,
                                                  std::uint64_t seed = 0);

}  // namespace enrich

#endif  // ENRICH_FORWARD_SELECTION_H_
