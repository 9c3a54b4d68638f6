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

#ifndef ENRICH_SAMPLING_H_
#define ENRICH_SAMPLING_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enrich/feature_matrix.h"

namespace enrich {

// k nearest rows to row `i` by Euclidean distance on standardized features,
// excluding i itself and optionally restricted to rows carrying `restrict_to`.
// Ties break towards the lower row index. Throws when fewer than k
// candidates exist.
std::vector<std::size_t> Knn(const FeatureMatrix& m, std::size_t i, int k,
                             std::optional<std::uint8_t> restrict_to = std::nullopt);

// Where an output row came from. Indices refer to the matrix the operation
// received.
struct RowOrigin {
  enum class Kind { kOriginal, kSynthetic };
  Kind kind = Kind::kOriginal;
  std::size_t source = 0;    // original row, or the seed row of a synthetic
  std::size_t neighbor = 0;  // synthetic only
  double lambda = 0.0;       // synthetic only, in [0, 1]
};

enum class RemovalReason { kTomekLink, kEnnDisagreement };

struct Removal {
  std::size_t index = 0;  // row in the matrix the removing stage received
  RowOrigin origin;
  RemovalReason reason = RemovalReason::kTomekLink;
};

struct ResampleResult {
  FeatureMatrix matrix;
  std::vector<RowOrigin> provenance;  // one per output row
  std::vector<Removal> removed;
  std::size_t synthetic_count = 0;
  std::vector<std::string> warnings;
};

// SMOTE. Synthesizes max(0, ceil(target_ratio * N_maj) - N_min) minority rows
// a + lambda * (b - a) where a is a random minority row, b one of its k
// nearest minority neighbours (k clamped to N_min - 1) and lambda ~ U[0, 1].
// Original rows come first, unchanged.
ResampleResult Smote(const FeatureMatrix& m, double target_ratio, int k,
                     std::uint64_t seed);

// Removes the majority member of every opposite-label mutual 1-NN pair.
ResampleResult TomekLinks(const FeatureMatrix& m);

// Single-pass edited nearest neighbours: flags rows whose label differs from
// the strict majority label of their k nearest neighbours in the input, then
// removes all flagged rows.
ResampleResult EditedNearestNeighbours(const FeatureMatrix& m, int k = 3);

// ADASYN. G = round((N_maj - N_min) * beta) synthetics allocated in
// proportion to r_i, the majority fraction among each minority row's k
// nearest neighbours. Allocation is floor(G * r_i / sum r) with the residue
// given one at a time to the highest-r_i rows. sum r == 0 yields no
// synthetics and a warning.
ResampleResult Adasyn(const FeatureMatrix& m, double beta, int k,
                      std::uint64_t seed);

ResampleResult SmoteTomek(const FeatureMatrix& m, double target_ratio, int k,
                          std::uint64_t seed);

ResampleResult SmoteEnn(const FeatureMatrix& m, double target_ratio,
                        int k_smote, int k_enn, std::uint64_t seed);

std::string_view ToString(RemovalReason reason);

}  // namespace enrich

#endif  // ENRICH_SAMPLING_H_
