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

#include "enrich/imputation.h"

#include <algorithm>
#include <optional>

#include "enrich/error.h"

namespace enrich {
namespace {

// Mean of observed cells in [lo, hi]; nullopt when none.
std::optional<double> WindowMean(const std::vector<double>& x, const std::vector<std::uint8_t>& missing,
                                 std::size_t lo, std::size_t hi) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (missing[i]) continue;
    sum += x[i];
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> Combine(std::optional<double> a, std::optional<double> b) {
  if (a && b) return 0.5 * (*a + *b);
  return a ? a : b;
}

}  // namespace

std::size_t ImputationReport::TotalFilled() const {
  std::size_t total = 0;
  for (const auto& [name, count] : filled) total += count;
  return total;
}

std::pair<TimeSeriesFrame, ImputationReport> ImputeZero(const TimeSeriesFrame& frame) {
  ImputationReport report;
  report.method = "zero";
  std::vector<std::vector<double>> values;
  values.reserve(frame.num_columns());
  for (const Column& col : frame.columns()) {
    std::vector<double> v = col.values;
    std::size_t filled = 0;
    for (double& cell : v) {
      if (IsNull(cell)) {
        cell = 0.0;
        ++filled;
      }
    }
    report.filled[col.name] = filled;
    values.push_back(std::move(v));
  }
  return {frame.WithValues(std::move(values)), std::move(report)};
}

std::pair<TimeSeriesFrame, ImputationReport> ImputeRollingMean(const TimeSeriesFrame& frame,
                                                               int window) {
  if (window < 2) throw InvalidArgument("imputation window must be >= 2");
  const std::size_t n = frame.length();
  const auto w = static_cast<std::size_t>(window);
  if (w > n) {
    throw InvalidArgument("imputation window " + std::to_string(w) + " exceeds frame length " +
                          std::to_string(n));
  }
  ImputationReport report;
  report.method = "rolling_mean";
  report.window = w;

  std::vector<std::vector<double>> values;
  values.reserve(frame.num_columns());
  for (const Column& col : frame.columns()) {
    const std::vector<double>& x = col.values;
    std::size_t observed = 0;
    std::size_t zeros = 0;
    for (double v : x) {
      if (IsNull(v)) continue;
      ++observed;
      if (v == 0.0) ++zeros;
    }
    const bool zero_missing =
        zeros > 0 && static_cast<double>(zeros) <
                         kZeroAsMissingMaxShare * static_cast<double>(observed);
    if (zero_missing) report.zero_as_missing.push_back(col.name);

    std::vector<std::uint8_t> missing(n, 0);
    for (std::size_t t = 0; t < n; ++t) {
      missing[t] = IsNull(x[t]) || (zero_missing && x[t] == 0.0) ? 1 : 0;
    }
    const std::optional<double> column_mean = WindowMean(x, missing, 0, n - 1);

    std::vector<double> out = x;
    std::size_t filled = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (!missing[t]) continue;
      if (t == 0) {
        if (IsNull(x[t])) report.residual_nulls.push_back({col.name, 0});
        continue;
      }
      std::optional<double> prev;
      std::optional<double> next;
      if (t >= w) prev = WindowMean(x, missing, t - w, t - 1);
      if (t + w <= n - 1) next = WindowMean(x, missing, t + 1, t + w);
      std::optional<double> fill = Combine(prev, next);
      if (!fill) {
        std::optional<double> prev_part = WindowMean(x, missing, t >= w ? t - w : 0, t - 1);
        std::optional<double> next_part;
        if (t + 1 <= n - 1) next_part = WindowMean(x, missing, t + 1, std::min(n - 1, t + w));
        fill = Combine(prev_part, next_part);
        if (!fill) fill = column_mean;
        ++report.fallback_fills;
      }
      out[t] = fill.value_or(0.0);
      ++filled;
    }
    report.filled[col.name] = filled;
    values.push_back(std::move(out));
  }
  return {frame.WithValues(std::move(values)), std::move(report)};
}

}  // namespace enrich
