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

#ifndef ENRICH_IMPUTATION_H_
#define ENRICH_IMPUTATION_H_

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "enrich/frame.h"

namespace enrich {

struct CellPosition {
  std::string column;
  std::size_t row = 0;
};

struct ImputationReport {
  std::string method;
  std::size_t window = 0;  // 0 for zero imputation
  std::map<std::string, std::size_t> filled;  // column -> filled cells
  std::vector<CellPosition> residual_nulls;   // only ever row 0
  // Columns where zero cells were treated as missing (observed zero share
  // below 1%).
  std::vector<std::string> zero_as_missing;
  // Cells that needed a fallback beyond the adjacent windows.
  std::size_t fallback_fills = 0;

  std::size_t TotalFilled() const;
};

std::pair<TimeSeriesFrame, ImputationReport> ImputeZero(const TimeSeriesFrame& frame);

// Rolling-mean imputation. Window means are computed once from the original
// column (nulls ignored). For each missing cell at row t > 0 the fill is the
// average of the previous window [t-w, t-1] and the following window
// [t+1, t+w], or whichever of the two is defined; the last row uses the
// previous window. Row-0 nulls stay null and are reported. Cells equal to 0
// count as missing only in columns whose observed zero share is below 1%.
// When neither full window holds an observed value the fill falls back to
// the truncated windows, then to the column mean, then to 0.
std::pair<TimeSeriesFrame, ImputationReport> ImputeRollingMean(
    const TimeSeriesFrame& frame, int window = 5);

inline constexpr double kZeroAsMissingMaxShare = 0.01;

}  // namespace enrich

#endif  // ENRICH_IMPUTATION_H_
