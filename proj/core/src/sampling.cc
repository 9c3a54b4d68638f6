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

#include "enrich/sampling.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "enrich/error.h"
#include "enrich/random.h"

namespace enrich {
namespace {

// Standardized view shared by the neighbour searches of one operation.
struct Space {
  std::vector<double> z;
  std::size_t d = 0;
  std::size_t n = 0;
  const std::vector<std::uint8_t>* labels = nullptr;

  explicit Space(const FeatureMatrix& m)
      : z(m.Standardized()), d(m.cols()), n(m.rows()), labels(&m.labels()) {}

  double Distance2(std::size_t a, std::size_t b) const {
    const double* pa = z.data() + a * d;
    const double* pb = z.data() + b * d;
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = pa[j] - pb[j];
      s += diff * diff;
    }
    return s;
  }

  // k nearest to i ordered by (distance, index), excluding i.
  std::vector<std::size_t> Nearest(std::size_t i, std::size_t k,
                                   std::optional<std::uint8_t> restrict_to) const {
    std::vector<std::pair<double, std::size_t>> best;
    best.reserve(k + 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (restrict_to && (*labels)[j] != *restrict_to) continue;
      const std::pair<double, std::size_t> cand{Distance2(i, j), j};
      if (best.size() == k && !(cand < best.back())) continue;
      auto pos = std::upper_bound(best.begin(), best.end(), cand);
      best.insert(pos, cand);
      if (best.size() > k) best.pop_back();
    }
    if (best.size() < k) {
      throw InvalidArgument("k-NN query needs " + std::to_string(k) +
                            " candidates, only " + std::to_string(best.size()) +
                            " available");
    }
    std::vector<std::size_t> out;
    out.reserve(k);
    for (const auto& b : best) out.push_back(b.second);
    return out;
  }
};

ResampleResult Passthrough(const FeatureMatrix& m) {
  ResampleResult r;
  r.matrix = m;
  r.provenance.resize(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) r.provenance[i] = {RowOrigin::Kind::kOriginal, i, 0, 0.0};
  return r;
}

ResampleResult RemoveRows(const FeatureMatrix& m, const std::vector<std::uint8_t>& flagged,
                          RemovalReason reason) {
  ResampleResult r;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const RowOrigin origin{RowOrigin::Kind::kOriginal, i, 0, 0.0};
    if (flagged[i]) {
      r.removed.push_back({i, origin, reason});
    } else {
      keep.push_back(i);
      r.provenance.push_back(origin);
    }
  }
  r.matrix = m.SelectRows(keep);
  return r;
}

std::size_t CeilCount(double v) {
  return static_cast<std::size_t>(std::max(0.0, std::ceil(v - 1e-9)));
}

// Appends synthetic rows a + lambda * (b - a) to `m`.
ResampleResult AppendSynthetic(const FeatureMatrix& m, std::uint8_t label,
                               const std::vector<RowOrigin>& synthetic) {
  ResampleResult r;
  std::vector<double> values = m.values();
  std::vector<std::uint8_t> labels = m.labels();
  values.reserve(values.size() + synthetic.size() * m.cols());
  for (const auto& s : synthetic) {
    auto a = m.row(s.source);
    auto b = m.row(s.neighbor);
    for (std::size_t j = 0; j < m.cols(); ++j) values.push_back(a[j] + s.lambda * (b[j] - a[j]));
    labels.push_back(label);
  }
  r.matrix = FeatureMatrix(m.cols(), std::move(values), std::move(labels), m.feature_names());
  r.provenance.reserve(m.rows() + synthetic.size());
  for (std::size_t i = 0; i < m.rows(); ++i) r.provenance.push_back({RowOrigin::Kind::kOriginal, i, 0, 0.0});
  r.provenance.insert(r.provenance.end(), synthetic.begin(), synthetic.end());
  r.synthetic_count = synthetic.size();
  return r;
}

// Re-expresses a second-stage result in terms of the first stage's input.
ResampleResult Compose(const ResampleResult& first, ResampleResult second) {
  for (auto& p : second.provenance) p = first.provenance.at(p.source);
  for (auto& rm : second.removed) rm.origin = first.provenance.at(rm.origin.source);
  second.synthetic_count = first.synthetic_count;
  std::vector<std::string> warnings = first.warnings;
  warnings.insert(warnings.end(), second.warnings.begin(), second.warnings.end());
  second.warnings = std::move(warnings);
  std::vector<Removal> removed = first.removed;
  removed.insert(removed.end(), second.removed.begin(), second.removed.end());
  second.removed = std::move(removed);
  return second;
}

void RequireBothClasses(const FeatureMatrix& m, const char* op) {
  if (m.CountLabel(0) == 0 || m.CountLabel(1) == 0) {
    throw InvalidArgument(std::string(op) + " requires both classes");
  }
}

}  // namespace

std::vector<std::size_t> Knn(const FeatureMatrix& m, std::size_t i, int k,
                             std::optional<std::uint8_t> restrict_to) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (i >= m.rows()) throw InvalidArgument("query row out of range");
  Space space(m);
  return space.Nearest(i, static_cast<std::size_t>(k), restrict_to);
}

ResampleResult Smote(const FeatureMatrix& m, double target_ratio, int k, std::uint64_t seed) {
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw InvalidArgument("SMOTE target_ratio must lie in (0, 1]");
  }
  if (k < 1) throw InvalidArgument("SMOTE k must be >= 1");
  RequireBothClasses(m, "SMOTE");
  const std::uint8_t minority = m.MinorityLabel();
  const std::size_t n_min = m.CountLabel(minority);
  const std::size_t n_maj = m.rows() - n_min;
  if (n_min < 2) throw InvalidArgument("SMOTE needs at least 2 minority rows");
  const std::size_t wanted = CeilCount(target_ratio * static_cast<double>(n_maj));
  const std::size_t count = wanted > n_min ? wanted - n_min : 0;
  if (count == 0) return Passthrough(m);

  const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k), n_min - 1);
  Space space(m);
  std::vector<std::size_t> minority_rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.labels()[i] == minority) minority_rows.push_back(i);
  }
  std::vector<std::vector<std::size_t>> neighbors(m.rows());
  for (std::size_t i : minority_rows) neighbors[i] = space.Nearest(i, k_eff, minority);

  Rng rng(seed);
  std::vector<RowOrigin> synthetic;
  synthetic.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t a = minority_rows[rng.Below(minority_rows.size())];
    const std::size_t b = neighbors[a][rng.Below(k_eff)];
    synthetic.push_back({RowOrigin::Kind::kSynthetic, a, b, rng.UniformClosed()});
  }
  return AppendSynthetic(m, minority, synthetic);
}

ResampleResult TomekLinks(const FeatureMatrix& m) {
  if (m.rows() < 2) return Passthrough(m);
  if (m.CountLabel(0) == 0 || m.CountLabel(1) == 0) return Passthrough(m);
  const std::uint8_t minority = m.MinorityLabel();
  Space space(m);
  std::vector<std::uint8_t> flagged(m.rows(), 0);
  // Every link has exactly one minority member, so scanning minority rows
  // finds all of them.
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.labels()[i] != minority) continue;
    const std::size_t j = space.Nearest(i, 1, std::nullopt).front();
    if (m.labels()[j] == minority) continue;
    if (space.Nearest(j, 1, std::nullopt).front() == i) flagged[j] = 1;
  }
  return RemoveRows(m, flagged, RemovalReason::kTomekLink);
}

ResampleResult EditedNearestNeighbours(const FeatureMatrix& m, int k) {
  if (k < 1) throw InvalidArgument("ENN k must be >= 1");
  if (m.rows() <= static_cast<std::size_t>(k)) {
    throw InvalidArgument("ENN needs more than k rows");
  }
  Space space(m);
  const auto kk = static_cast<std::size_t>(k);
  std::vector<std::uint8_t> flagged(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t ones = 0;
    for (std::size_t j : space.Nearest(i, kk, std::nullopt)) ones += m.labels()[j];
    const std::size_t zeros = kk - ones;
    if (2 * ones > kk && m.labels()[i] == 0) flagged[i] = 1;
    if (2 * zeros > kk && m.labels()[i] == 1) flagged[i] = 1;
  }
  return RemoveRows(m, flagged, RemovalReason::kEnnDisagreement);
}

ResampleResult Adasyn(const FeatureMatrix& m, double beta, int k, std::uint64_t seed) {
  if (!(beta >= 0.0)) throw InvalidArgument("ADASYN beta must be >= 0");
  if (k < 1) throw InvalidArgument("ADASYN k must be >= 1");
  RequireBothClasses(m, "ADASYN");
  const std::uint8_t minority = m.MinorityLabel();
  const std::size_t n_min = m.CountLabel(minority);
  const std::size_t n_maj = m.rows() - n_min;
  if (n_min < 2) throw InvalidArgument("ADASYN needs at least 2 minority rows");
  const auto total = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_maj - n_min) * beta));
  if (total == 0) return Passthrough(m);

  Space space(m);
  const std::size_t k_all = std::min<std::size_t>(static_cast<std::size_t>(k), m.rows() - 1);
  const std::size_t k_min = std::min<std::size_t>(static_cast<std::size_t>(k), n_min - 1);
  std::vector<std::size_t> minority_rows;
  std::vector<double> hardness;
  double hardness_sum = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.labels()[i] != minority) continue;
    std::size_t majority = 0;
    for (std::size_t j : space.Nearest(i, k_all, std::nullopt)) {
      majority += m.labels()[j] != minority ? 1 : 0;
    }
    minority_rows.push_back(i);
    hardness.push_back(static_cast<double>(majority) / static_cast<double>(k_all));
    hardness_sum += hardness.back();
  }
  if (hardness_sum == 0.0) {
    ResampleResult r = Passthrough(m);
    r.warnings.push_back(
        "ADASYN: no minority row has a majority neighbour; no synthetic rows generated");
    return r;
  }

  std::vector<std::size_t> allocation(minority_rows.size());
  std::size_t allocated = 0;
  for (std::size_t i = 0; i < minority_rows.size(); ++i) {
    allocation[i] = static_cast<std::size_t>(
        std::floor(static_cast<double>(total) * hardness[i] / hardness_sum));
    allocated += allocation[i];
  }
  std::vector<std::size_t> order(minority_rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return hardness[a] > hardness[b]; });
  for (std::size_t r = 0; allocated < total; ++r, ++allocated) {
    ++allocation[order[r % order.size()]];
  }

  Rng rng(seed);
  std::vector<RowOrigin> synthetic;
  synthetic.reserve(total);
  for (std::size_t i = 0; i < minority_rows.size(); ++i) {
    if (allocation[i] == 0) continue;
    const std::size_t a = minority_rows[i];
    const auto neighbors = space.Nearest(a, k_min, minority);
    for (std::size_t s = 0; s < allocation[i]; ++s) {
      const std::size_t b = neighbors[rng.Below(neighbors.size())];
      synthetic.push_back({RowOrigin::Kind::kSynthetic, a, b, rng.UniformClosed()});
    }
  }
  return AppendSynthetic(m, minority, synthetic);
}

ResampleResult SmoteTomek(const FeatureMatrix& m, double target_ratio, int k,
                          std::uint64_t seed) {
  ResampleResult first = Smote(m, target_ratio, k, seed);
  return Compose(first, TomekLinks(first.matrix));
}

ResampleResult SmoteEnn(const FeatureMatrix& m, double target_ratio, int k_smote,
                        int k_enn, std::uint64_t seed) {
  ResampleResult first = Smote(m, target_ratio, k_smote, seed);
  return Compose(first, EditedNearestNeighbours(first.matrix, k_enn));
}

std::string_view ToString(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::kTomekLink:
      return "tomek_link";
    case RemovalReason::kEnnDisagreement:
      return "enn_disagreement";
  }
  return "unknown";
}

}  // namespace enrich
