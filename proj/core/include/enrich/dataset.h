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

#ifndef ENRICH_DATASET_H_
#define ENRICH_DATASET_H_

#include <cstdint>
#include <vector>

#include "enrich/frame.h"

namespace enrich {

// Relabels for ahead-of-time prediction: the `k` rows preceding each event
// become positive (clamped at row 0, never double counted) and the event rows
// themselves are dropped. Output length is input length minus the input
// positive count.
LabeledDataset CurveShift(const LabeledDataset& ds, int k);

// Random train/test split with |test| = round(test_fraction * n). When
// `stratified` is set each class contributes round(test_fraction * count)
// test rows (adjusted so the total still matches), which keeps rare
// positives on both sides.
SplitResult SplitRandom(const LabeledDataset& ds, double test_fraction,
                        std::uint64_t seed, bool stratified = true);

// First ceil(train_fraction * n) rows train, the remainder test.
SplitResult SplitTimeBased(const LabeledDataset& ds, double train_fraction);

// Contiguous sessions separated wherever consecutive timestamps differ by
// more than `gap_threshold_seconds`.
std::vector<LabeledDataset> SplitRunBased(const LabeledDataset& ds,
                                          std::int64_t gap_threshold_seconds);

// Builds a derived rare-event dataset of `total` rows with
// round(rarity * total) fault rows at seeded positions. Normal rows are taken
// in order from `normal`, fault rows in order from `fault`. row_ids refer to
// the source frame of each row (fault rows when y == 1). The result has no
// timestamps.
LabeledDataset DeriveRarity(const TimeSeriesFrame& normal,
                            const TimeSeriesFrame& fault, double rarity,
                            std::size_t total, std::uint64_t seed);

enum class Aggregator { kMean, kFirst };

// Collapses each block of `factor` rows into one. Mean ignores nulls; the
// block label is the max of its labels; the block timestamp and row id are
// those of its first row.
LabeledDataset Downsample(const LabeledDataset& ds, int factor,
                          Aggregator aggregator);

}  // namespace enrich

#endif  // ENRICH_DATASET_H_
