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

#include "enrich/synthetic.h"

#include <cmath>
#include <numbers>
#include <string>

#include "enrich/dataset.h"
#include "enrich/error.h"
#include "enrich/random.h"

namespace enrich {
namespace {

constexpr std::int64_t kStartEpoch = 1704067200;  // 2024-01-01T00:00:00Z
constexpr std::int64_t kStepSeconds = 60;

std::string FeatureName(int j) { return "x" + std::to_string(j + 1); }

std::vector<double> SmoothNoise(std::size_t n, const VibrationOptions& o, Rng& rng) {
  std::vector<double> out(n);
  const double innovation = o.scale * std::sqrt(1.0 - o.smoothing * o.smoothing);
  double s = o.scale * rng.Normal();
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) s = o.smoothing * s + innovation * rng.Normal();
    out[t] = o.level + s;
  }
  return out;
}

void CheckOptions(const VibrationOptions& o) {
  if (o.features < 1) throw InvalidArgument("generator needs at least one feature");
  if (!(o.smoothing >= 0.0 && o.smoothing < 1.0)) throw InvalidArgument("smoothing must lie in [0, 1)");
  if (!(o.scale > 0.0)) throw InvalidArgument("scale must be > 0");
  if (o.burst_period < 2) throw InvalidArgument("burst period must be >= 2");
  if (!(o.burst_share >= 0.0 && o.burst_share <= 1.0)) throw InvalidArgument("burst share must lie in [0, 1]");
}

std::vector<std::int64_t> MinuteStamps(std::size_t n) {
  std::vector<std::int64_t> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = kStartEpoch + static_cast<std::int64_t>(i) * kStepSeconds;
  return ts;
}

}  // namespace

VibrationSource GenerateVibration(std::size_t normal_rows, std::size_t fault_rows,
                                  const VibrationOptions& options, std::uint64_t seed) {
  CheckOptions(options);
  std::vector<Column> normal, fault;
  for (int j = 0; j < options.features; ++j) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(j)));
    normal.push_back({FeatureName(j), SmoothNoise(normal_rows, options, rng)});
    const double phase = 2.0 * std::numbers::pi * rng.Uniform();
    const double burst_amp = options.scale * std::sqrt(2.0 * options.burst_share);
    const double noise_sd = options.scale * std::sqrt(1.0 - options.burst_share);
    std::vector<double> f(fault_rows);
    for (std::size_t t = 0; t < fault_rows; ++t) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) /
                               static_cast<double>(options.burst_period) + phase;
      f[t] = options.level + burst_amp * std::sin(angle) + noise_sd * rng.Normal();
    }
    fault.push_back({FeatureName(j), std::move(f)});
  }
  return {TimeSeriesFrame(std::move(normal)), TimeSeriesFrame(std::move(fault))};
}

LabeledDataset VibrationDataset(double rarity, std::size_t total, std::uint64_t seed,
                                const VibrationOptions& options) {
  const auto positives = static_cast<std::size_t>(std::llround(rarity * static_cast<double>(total)));
  const VibrationSource src = GenerateVibration(total, positives, options, DeriveSeed(seed, 1));
  LabeledDataset ds = DeriveRarity(src.normal, src.fault, rarity, total, DeriveSeed(seed, 2));
  TimeSeriesFrame stamped(ds.frame().columns(), MinuteStamps(ds.length()));
  LabeledDataset out = ds.WithFrame(std::move(stamped));
  return out;
}

LabeledDataset LeadingSignatureDataset(std::size_t length, std::size_t events, int lead,
                                       std::uint64_t seed, const VibrationOptions& options) {
  CheckOptions(options);
  if (lead < 1) throw InvalidArgument("signature lead must be >= 1");
  const auto l = static_cast<std::size_t>(lead);
  const std::size_t min_gap = 4 * l + 8;
  if (events == 0 || events * min_gap + 2 * min_gap > length) {
    throw InvalidArgument("series too short for the requested event count");
  }
  std::vector<Column> cols;
  Rng rng(seed);
  for (int j = 0; j < options.features; ++j) {
    cols.push_back({FeatureName(j), SmoothNoise(length, options, rng)});
  }
  // Events at evenly spread slots with seeded jitter.
  std::vector<std::uint8_t> y(length, 0);
  const std::size_t slot = (length - 2 * min_gap) / events;
  for (std::size_t e = 0; e < events; ++e) {
    const std::size_t jitter = slot > min_gap ? rng.Below(slot - min_gap) : 0;
    const std::size_t at = min_gap + e * slot + jitter;
    y[at] = 1;
    const double sign = rng.Uniform() < 0.5 ? -1.0 : 1.0;
    cols[0].values[at - l] += sign * 4.0 * options.scale;
  }
  return LabeledDataset(TimeSeriesFrame(std::move(cols), MinuteStamps(length)), std::move(y));
}

TimeSeriesFrame InjectNulls(const TimeSeriesFrame& frame, double share, std::uint64_t seed) {
  if (!(share >= 0.0 && share <= 1.0)) throw InvalidArgument("null share must lie in [0, 1]");
  Rng rng(seed);
  std::vector<std::vector<double>> values;
  for (const Column& c : frame.columns()) {
    std::vector<double> v = c.values;
    for (double& cell : v) {
      if (rng.Uniform() < share) cell = kNull;
    }
    values.push_back(std::move(v));
  }
  return frame.WithValues(std::move(values));
}

}  // namespace enrich
