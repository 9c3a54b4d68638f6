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

#include "enrich/frame.h"

#include <set>
#include <utility>

#include "enrich/error.h"

namespace enrich {

TimeSeriesFrame::TimeSeriesFrame(
    std::vector<Column> columns,
    std::optional<std::vector<std::int64_t>> timestamps)
    : columns_(std::move(columns)), timestamps_(std::move(timestamps)) {
  if (!columns_.empty()) {
    length_ = columns_.front().values.size();
  } else if (timestamps_) {
    length_ = timestamps_->size();
  }
  std::set<std::string_view> names;
  for (const auto& c : columns_) {
    if (c.values.size() != length_) {
      throw InvalidArgument("column '" + c.name + "' has " +
                            std::to_string(c.values.size()) + " rows, expected " +
                            std::to_string(length_));
    }
    if (!names.insert(c.name).second) {
      throw InvalidArgument("duplicate column name '" + c.name + "'");
    }
  }
  if (timestamps_) {
    if (timestamps_->size() != length_) {
      throw InvalidArgument("timestamp count does not match column length");
    }
    for (std::size_t i = 1; i < timestamps_->size(); ++i) {
      if ((*timestamps_)[i] < (*timestamps_)[i - 1]) {
        throw InvalidArgument("timestamps decrease at row " + std::to_string(i));
      }
    }
  }
}

const Column* TimeSeriesFrame::FindColumn(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::size_t TimeSeriesFrame::IndexOf(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  throw InvalidArgument("no column named '" + std::string(name) + "'");
}

std::vector<std::string> TimeSeriesFrame::ColumnNames() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& c : columns_) names.push_back(c.name);
  return names;
}

TimeSeriesFrame TimeSeriesFrame::SelectRows(std::span<const std::size_t> rows) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) {
    Column picked{c.name, {}};
    picked.values.reserve(rows.size());
    for (std::size_t r : rows) picked.values.push_back(c.values.at(r));
    out.push_back(std::move(picked));
  }
  std::optional<std::vector<std::int64_t>> ts;
  if (timestamps_) {
    ts.emplace();
    ts->reserve(rows.size());
    for (std::size_t r : rows) ts->push_back(timestamps_->at(r));
  }
  TimeSeriesFrame frame(std::move(out), std::move(ts));
  frame.length_ = rows.size();
  return frame;
}

TimeSeriesFrame TimeSeriesFrame::SelectColumns(
    std::span<const std::size_t> columns) const {
  std::vector<Column> out;
  out.reserve(columns.size());
  for (std::size_t c : columns) out.push_back(columns_.at(c));
  TimeSeriesFrame frame(std::move(out), timestamps_);
  frame.length_ = length_;
  return frame;
}

TimeSeriesFrame TimeSeriesFrame::AddColumns(std::vector<Column> extra) const {
  std::vector<Column> all = columns_;
  for (auto& c : extra) all.push_back(std::move(c));
  TimeSeriesFrame frame(std::move(all), timestamps_);
  if (frame.columns_.empty()) frame.length_ = length_;
  return frame;
}

TimeSeriesFrame TimeSeriesFrame::WithValues(
    std::vector<std::vector<double>> values) const {
  if (values.size() != columns_.size()) {
    throw InvalidArgument("WithValues: column count mismatch");
  }
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out.push_back({columns_[i].name, std::move(values[i])});
  }
  TimeSeriesFrame frame(std::move(out), timestamps_);
  if (frame.columns_.empty()) frame.length_ = length_;
  return frame;
}

std::size_t TimeSeriesFrame::NullCount() const {
  std::size_t n = 0;
  for (const auto& c : columns_) {
    for (double v : c.values) n += IsNull(v) ? 1 : 0;
  }
  return n;
}

LabeledDataset::LabeledDataset(TimeSeriesFrame frame, std::vector<std::uint8_t> y,
                               std::vector<std::size_t> row_ids)
    : frame_(std::move(frame)), y_(std::move(y)), row_ids_(std::move(row_ids)) {
  if (frame_.num_columns() > 0 || frame_.has_timestamps()) {
    if (frame_.length() != y_.size()) {
      throw InvalidArgument("label count " + std::to_string(y_.size()) +
                            " does not match frame length " +
                            std::to_string(frame_.length()));
    }
  }
  if (row_ids_.empty()) {
    row_ids_.resize(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) row_ids_[i] = i;
  } else if (row_ids_.size() != y_.size()) {
    throw InvalidArgument("row id count does not match label count");
  }
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (y_[i] > 1) {
      throw InvalidArgument("label at row " + std::to_string(i) + " is not 0/1");
    }
    positive_count_ += y_[i];
  }
}

double LabeledDataset::rarity() const {
  return y_.empty() ? 0.0
                    : static_cast<double>(positive_count_) /
                          static_cast<double>(y_.size());
}

LabeledDataset LabeledDataset::SelectRows(std::span<const std::size_t> rows) const {
  std::vector<std::uint8_t> y;
  std::vector<std::size_t> ids;
  y.reserve(rows.size());
  ids.reserve(rows.size());
  for (std::size_t r : rows) {
    y.push_back(y_.at(r));
    ids.push_back(row_ids_.at(r));
  }
  LabeledDataset out(frame_.SelectRows(rows), std::move(y), std::move(ids));
  out.metadata_ = metadata_;
  return out;
}

LabeledDataset LabeledDataset::WithFrame(TimeSeriesFrame frame) const {
  LabeledDataset out(std::move(frame), y_, row_ids_);
  out.metadata_ = metadata_;
  return out;
}

std::string_view ToString(SplitMethod method) {
  switch (method) {
    case SplitMethod::kRandom:
      return "random";
    case SplitMethod::kTime:
      return "time";
    case SplitMethod::kRun:
      return "run";
  }
  return "unknown";
}

}  // namespace enrich
