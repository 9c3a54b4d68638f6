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

#include "enrich/dataset.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "enrich/csv.h"
#include "enrich/error.h"
#include "enrich/random.h"

namespace enrich {
namespace {

std::vector<std::size_t> Iota(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out(end - begin);
  std::iota(out.begin(), out.end(), begin);
  return out;
}

std::size_t RoundCount(double v) {
  return static_cast<std::size_t>(std::llround(v));
}

SplitResult MakeSplit(const LabeledDataset& ds, std::vector<std::size_t> train,
                      std::vector<std::size_t> test, SplitMethod method) {
  SplitResult out;
  out.train = ds.SelectRows(train);
  out.test = ds.SelectRows(test);
  out.method = method;
  out.metadata["method"] = std::string(ToString(method));
  out.metadata["train_rows"] = std::to_string(train.size());
  out.metadata["test_rows"] = std::to_string(test.size());
  out.metadata["train_positives"] = std::to_string(out.train.positive_count());
  out.metadata["test_positives"] = std::to_string(out.test.positive_count());
  out.train_indices = std::move(train);
  out.test_indices = std::move(test);
  return out;
}

}  // namespace

LabeledDataset CurveShift(const LabeledDataset& ds, int k) {
  if (k <= 0) throw InvalidArgument("curve shift requires k >= 1");
  if (ds.length() == 0) throw InvalidArgument("curve shift on an empty dataset");
  const auto& y = ds.y();
  const std::size_t n = y.size();
  std::vector<std::uint8_t> shifted(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!y[i]) continue;
    const std::size_t first = i >= static_cast<std::size_t>(k) ? i - k : 0;
    for (std::size_t j = first; j < i; ++j) shifted[j] = 1;
  }
  std::vector<std::size_t> keep;
  keep.reserve(n - ds.positive_count());
  for (std::size_t i = 0; i < n; ++i) {
    if (!y[i]) keep.push_back(i);
  }
  LabeledDataset kept = ds.SelectRows(keep);
  std::vector<std::uint8_t> labels;
  labels.reserve(keep.size());
  for (std::size_t i : keep) labels.push_back(shifted[i]);
  LabeledDataset out(kept.frame(), std::move(labels), kept.row_ids());
  for (const auto& [key, value] : ds.metadata()) out.SetMetadata(key, value);
  out.SetMetadata("curve_shift", std::to_string(k));
  return out;
}

SplitResult SplitRandom(const LabeledDataset& ds, double test_fraction,
                        std::uint64_t seed, bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgument("test_fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.length();
  const std::size_t n_test = RoundCount(test_fraction * static_cast<double>(n));
  if (n_test < 1 || n_test >= n) {
    throw InvalidArgument("dataset of " + std::to_string(n) +
                          " rows is too small to split at test_fraction " +
                          std::to_string(test_fraction));
  }
  Rng rng(seed);
  std::vector<std::uint8_t> in_test(n, 0);
  if (stratified) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (ds.y()[i] ? pos : neg).push_back(i);
    std::size_t pos_test = RoundCount(test_fraction * static_cast<double>(pos.size()));
    if (pos.size() >= 2) pos_test = std::clamp<std::size_t>(pos_test, 1, pos.size() - 1);
    pos_test = std::min(pos_test, n_test);
    std::size_t neg_test = n_test - pos_test;
    if (neg_test > neg.size()) {
      neg_test = neg.size();
      pos_test = n_test - neg_test;
    }
    rng.Shuffle(std::span<std::size_t>(pos));
    rng.Shuffle(std::span<std::size_t>(neg));
    for (std::size_t i = 0; i < pos_test; ++i) in_test[pos[i]] = 1;
    for (std::size_t i = 0; i < neg_test; ++i) in_test[neg[i]] = 1;
  } else {
    for (std::size_t i : rng.SampleWithoutReplacement(n, n_test)) in_test[i] = 1;
  }
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < n; ++i) (in_test[i] ? test : train).push_back(i);
  SplitResult out = MakeSplit(ds, std::move(train), std::move(test), SplitMethod::kRandom);
  out.metadata["seed"] = std::to_string(seed);
  out.metadata["stratified"] = stratified ? "true" : "false";
  out.metadata["test_fraction"] = std::to_string(test_fraction);
  return out;
}

SplitResult SplitTimeBased(const LabeledDataset& ds, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train_fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.length();
  // The epsilon keeps exact products such as 0.8 * 10 from rounding up.
  const auto n_train = static_cast<std::size_t>(
      std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
  if (n_train < 1 || n_train >= n) {
    throw InvalidArgument("dataset of " + std::to_string(n) +
                          " rows is too small for a time-based split");
  }
  SplitResult out = MakeSplit(ds, Iota(0, n_train), Iota(n_train, n), SplitMethod::kTime);
  out.metadata["train_fraction"] = std::to_string(train_fraction);
  if (ds.frame().has_timestamps()) {
    const auto& ts = *ds.frame().timestamps();
    out.metadata["train_end"] = FormatIso8601(ts[n_train - 1]);
    out.metadata["test_start"] = FormatIso8601(ts[n_train]);
  }
  return out;
}

std::vector<LabeledDataset> SplitRunBased(const LabeledDataset& ds,
                                          std::int64_t gap_threshold_seconds) {
  if (!ds.frame().has_timestamps()) {
    throw InvalidArgument("run-based split requires timestamps");
  }
  if (gap_threshold_seconds <= 0) {
    throw InvalidArgument("gap threshold must be positive");
  }
  const auto& ts = *ds.frame().timestamps();
  std::vector<LabeledDataset> sessions;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    LabeledDataset s = ds.SelectRows(Iota(start, end));
    s.SetMetadata("session", std::to_string(sessions.size() + 1));
    s.SetMetadata("session_start", FormatIso8601(ts[start]));
    s.SetMetadata("session_end", FormatIso8601(ts[end - 1]));
    sessions.push_back(std::move(s));
    start = end;
  };
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i] - ts[i - 1] > gap_threshold_seconds) emit(i);
  }
  if (start < ts.size()) emit(ts.size());
  return sessions;
}

LabeledDataset DeriveRarity(const TimeSeriesFrame& normal,
                            const TimeSeriesFrame& fault, double rarity,
                            std::size_t total, std::uint64_t seed) {
  if (!(rarity > 0.0 && rarity < 1.0)) throw InvalidArgument("rarity must lie in (0, 1)");
  if (total == 0) throw InvalidArgument("total must be positive");
  if (normal.ColumnNames() != fault.ColumnNames()) {
    throw InvalidArgument("normal and fault frames have different column schemas");
  }
  const std::size_t n_pos = RoundCount(rarity * static_cast<double>(total));
  const std::size_t n_neg = total - n_pos;
  if (fault.length() < n_pos || normal.length() < n_neg) {
    throw InvalidArgument("insufficient source rows: need " + std::to_string(n_neg) +
                          " normal and " + std::to_string(n_pos) + " fault rows");
  }
  Rng rng(seed);
  std::vector<std::uint8_t> y(total, 0);
  for (std::size_t p : rng.SampleWithoutReplacement(total, n_pos)) y[p] = 1;

  std::vector<Column> columns;
  for (const auto& c : normal.columns()) columns.push_back({c.name, {}});
  std::vector<std::size_t> ids;
  ids.reserve(total);
  std::size_t next_normal = 0, next_fault = 0;
  for (std::size_t r = 0; r < total; ++r) {
    const TimeSeriesFrame& src = y[r] ? fault : normal;
    const std::size_t row = y[r] ? next_fault++ : next_normal++;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      columns[c].values.push_back(src.column(c).values[row]);
    }
    ids.push_back(row);
  }
  LabeledDataset out(TimeSeriesFrame(std::move(columns)), std::move(y), std::move(ids));
  out.SetMetadata("derived_rarity", std::to_string(rarity));
  out.SetMetadata("derived_seed", std::to_string(seed));
  return out;
}

LabeledDataset Downsample(const LabeledDataset& ds, int factor, Aggregator aggregator) {
  if (factor <= 0) throw InvalidArgument("downsample factor must be >= 1");
  const std::size_t n = ds.length();
  const auto f = static_cast<std::size_t>(factor);
  const std::size_t blocks = (n + f - 1) / f;
  const auto& frame = ds.frame();
  std::vector<std::vector<double>> values(frame.num_columns());
  std::vector<std::uint8_t> y(blocks, 0);
  std::vector<std::size_t> ids(blocks);
  std::optional<std::vector<std::int64_t>> ts;
  if (frame.has_timestamps()) ts.emplace(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * f;
    const std::size_t hi = std::min(n, lo + f);
    for (std::size_t r = lo; r < hi; ++r) y[b] = std::max(y[b], ds.y()[r]);
    ids[b] = ds.row_ids()[lo];
    if (ts) (*ts)[b] = (*frame.timestamps())[lo];
  }
  for (std::size_t c = 0; c < frame.num_columns(); ++c) {
    const auto& src = frame.column(c).values;
    auto& dst = values[c];
    dst.resize(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t lo = b * f;
      const std::size_t hi = std::min(n, lo + f);
      if (aggregator == Aggregator::kFirst) {
        dst[b] = src[lo];
        continue;
      }
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t r = lo; r < hi; ++r) {
        if (IsNull(src[r])) continue;
        sum += src[r];
        ++count;
      }
      dst[b] = count ? sum / static_cast<double>(count) : kNull;
    }
  }
  std::vector<Column> columns;
  for (std::size_t c = 0; c < frame.num_columns(); ++c) {
    columns.push_back({frame.column(c).name, std::move(values[c])});
  }
  LabeledDataset out(TimeSeriesFrame(std::move(columns), std::move(ts)), std::move(y),
                     std::move(ids));
  for (const auto& [key, value] : ds.metadata()) out.SetMetadata(key, value);
  out.SetMetadata("downsample_factor", std::to_string(factor));
  return out;
}

}  // namespace enrich
