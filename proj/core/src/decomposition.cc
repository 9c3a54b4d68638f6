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

#include <vector>

#include "enrich/augmentation.h"
#include "enrich/error.h"

namespace enrich {

Decomposition Decompose(std::span<const double> x, int period) {
  if (period < 2) throw InvalidArgument("decomposition period must be >= 2");
  const std::size_t n = x.size();
  const auto p = static_cast<std::size_t>(period);
  if (n < 2 * p) {
    throw InvalidArgument("decomposition needs at least two periods (" +
                          std::to_string(2 * p) + " rows), got " + std::to_string(n));
  }
  Decomposition d;
  d.trend.assign(n, 0.0);
  const std::size_t half = p / 2;
  const bool even = p % 2 == 0;
  const std::size_t first = half;
  const std::size_t last = n - 1 - half;
  for (std::size_t t = first; t <= last; ++t) {
    double sum = 0.0;
    if (even) {
      sum = 0.5 * (x[t - half] + x[t + half]);
      for (std::size_t i = t - half + 1; i < t + half; ++i) sum += x[i];
    } else {
      for (std::size_t i = t - half; i <= t + half; ++i) sum += x[i];
    }
    d.trend[t] = sum / static_cast<double>(p);
  }
  for (std::size_t t = 0; t < first; ++t) d.trend[t] = d.trend[first];
  for (std::size_t t = last + 1; t < n; ++t) d.trend[t] = d.trend[last];

  std::vector<double> phase_sum(p, 0.0);
  std::vector<std::size_t> phase_count(p, 0);
  for (std::size_t t = first; t <= last; ++t) {
    phase_sum[t % p] += x[t] - d.trend[t];
    ++phase_count[t % p];
  }
  std::vector<double> profile(p);
  double mean = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    profile[j] = phase_sum[j] / static_cast<double>(phase_count[j]);
    mean += profile[j];
  }
  mean /= static_cast<double>(p);
  for (auto& v : profile) v -= mean;

  d.seasonal.resize(n);
  d.residual.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    d.seasonal[t] = profile[t % p];
    d.residual[t] = x[t] - d.trend[t] - d.seasonal[t];
  }
  return d;
}

}  // namespace enrich
