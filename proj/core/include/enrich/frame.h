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

#ifndef ENRICH_FRAME_H_
#define ENRICH_FRAME_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace enrich {

// Null cells are stored as quiet NaN.
inline constexpr double kNull = std::numeric_limits<double>::quiet_NaN();
inline bool IsNull(double v) { return std::isnan(v); }

struct Column {
  std::string name;
  std::vector<double> values;
};

// Ordered multivariate series. Timestamps, when present, are seconds since the
// Unix epoch and must be non-decreasing. All columns share one length and
// column names are unique.
class TimeSeriesFrame {
 public:
  TimeSeriesFrame() = default;
  explicit TimeSeriesFrame(
      std::vector<Column> columns,
      std::optional<std::vector<std::int64_t>> timestamps = std::nullopt);

  std::size_t length() const { return length_; }
  std::size_t num_columns() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t i) const { return columns_.at(i); }

  // nullptr when absent.
  const Column* FindColumn(std::string_view name) const;
  // Throws InvalidArgument when absent.
  std::size_t IndexOf(std::string_view name) const;
  std::vector<std::string> ColumnNames() const;

  bool has_timestamps() const { return timestamps_.has_value(); }
  const std::optional<std::vector<std::int64_t>>& timestamps() const {
    return timestamps_;
  }

  TimeSeriesFrame SelectRows(std::span<const std::size_t> rows) const;
  TimeSeriesFrame SelectColumns(std::span<const std::size_t> columns) const;
  // Copy with `extra` appended after the existing columns.
  TimeSeriesFrame AddColumns(std::vector<Column> extra) const;
  // Copy with column values replaced; names and timestamps unchanged.
  TimeSeriesFrame WithValues(std::vector<std::vector<double>> values) const;

  std::size_t NullCount() const;

 private:
  std::vector<Column> columns_;
  std::optional<std::vector<std::int64_t>> timestamps_;
  std::size_t length_ = 0;
};

// A frame plus a binary response. `row_ids` tracks where each row came from
// (file row for loaded data, source-frame row for derived data) so that split
// and resampling bookkeeping can be audited.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(TimeSeriesFrame frame, std::vector<std::uint8_t> y,
                 std::vector<std::size_t> row_ids = {});

  const TimeSeriesFrame& frame() const { return frame_; }
  const std::vector<std::uint8_t>& y() const { return y_; }
  const std::vector<std::size_t>& row_ids() const { return row_ids_; }
  std::size_t length() const { return y_.size(); }
  std::size_t positive_count() const { return positive_count_; }
  std::size_t negative_count() const { return y_.size() - positive_count_; }
  double rarity() const;

  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }
  void SetMetadata(const std::string& key, std::string value) {
    metadata_[key] = std::move(value);
  }

  LabeledDataset SelectRows(std::span<const std::size_t> rows) const;
  // Same labels and row ids over a different frame of equal length.
  LabeledDataset WithFrame(TimeSeriesFrame frame) const;

 private:
  TimeSeriesFrame frame_;
  std::vector<std::uint8_t> y_;
  std::vector<std::size_t> row_ids_;
  std::size_t positive_count_ = 0;
  std::map<std::string, std::string> metadata_;
};

enum class SplitMethod { kRandom, kTime, kRun };

std::string_view ToString(SplitMethod method);

struct SplitResult {
  LabeledDataset train;
  LabeledDataset test;
  SplitMethod method = SplitMethod::kRandom;
  std::map<std::string, std::string> metadata;
  // Positions in the input dataset, ascending.
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

}  // namespace enrich

#endif  // ENRICH_FRAME_H_
