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

#ifndef ENRICH_SYNTHETIC_H_
#define ENRICH_SYNTHETIC_H_

#include <cstdint>

#include "enrich/frame.h"

namespace enrich {

// Vibration-style sensor source. Normal rows are low-pass filtered noise
// around a fixed level. Fault rows are white noise plus a periodic burst,
// scaled so both frames share mean and variance; a fault row is therefore
// only recognisable against its neighbours.
struct VibrationOptions {
  int features = 2;
  double level = 10.0;
  double scale = 1.0;        // marginal standard deviation of both frames
  double smoothing = 0.995;  // AR(1) coefficient of the normal rows
  int burst_period = 8;
  double burst_share = 0.5;  // share of fault variance carried by the burst
};

struct VibrationSource {
  TimeSeriesFrame normal;
  TimeSeriesFrame fault;
};

VibrationSource GenerateVibration(std::size_t normal_rows, std::size_t fault_rows,
                                  const VibrationOptions& options, std::uint64_t seed);

// Labeled vibration dataset of `total` rows at the given rarity, with
// one-minute timestamps.
LabeledDataset VibrationDataset(double rarity, std::size_t total, std::uint64_t seed,
                                const VibrationOptions& options = {});

// Smooth series with isolated events (y=1). A spike in the first feature
// precedes every event by exactly `lead` rows; nothing else marks it.
LabeledDataset LeadingSignatureDataset(std::size_t length, std::size_t events, int lead,
                                       std::uint64_t seed,
                                       const VibrationOptions& options = {});

// Copy with each cell nulled independently with probability `share`.
TimeSeriesFrame InjectNulls(const TimeSeriesFrame& frame, double share, std::uint64_t seed);

}  // namespace enrich

#endif  // ENRICH_SYNTHETIC_H_
