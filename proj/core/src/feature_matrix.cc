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

#include "enrich/feature_matrix.h"

#include <cmath>
#include <utility>

#include "enrich/error.h"

namespace enrich {

FeatureMatrix::FeatureMatrix(std::size_t num_features, std::vector<double> values,
                             std::vector<std::uint8_t> labels,
                             std::vector<std::string> feature_names)
    : num_features_(num_features),
      values_(std::move(values)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)) {
  if (num_features_ == 0) throw InvalidArgument("feature matrix needs d >= 1");
  if (values_.size() != labels_.size() * num_features_) {
    throw InvalidArgument("feature matrix value count does not match n x d");
  }
  if (feature_names_.empty()) {
    for (std::size_t j = 0; j < num_features_; ++j) {
      feature_names_.push_back("f" + std::to_string(j));
    }
  } else if (feature_names_.size() != num_features_) {
    throw InvalidArgument("feature name count does not match d");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (IsNull(values_[i])) {
      throw InvalidArgument("feature matrix contains a null at row " +
                            std::to_string(i / num_features_) + ", column '" +
                            feature_names_[i % num_features_] + "'");
    }
  }
  scale_.assign(num_features_, ColumnScale{});
  const std::size_t n = labels_.size();
  if (n == 0) return;
  for (std::size_t j = 0; j < num_features_; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += values_[i * num_features_ + j];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = values_[i * num_features_ + j] - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    scale_[j] = {mean, sd > 0.0 ? sd : 1.0};
  }
}

FeatureMatrix FeatureMatrix::FromDataset(const LabeledDataset& ds) {
  const auto& frame = ds.frame();
  const std::size_t n = ds.length();
  const std::size_t d = frame.num_columns();
  std::vector<double> values(n * d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto& col = frame.column(j).values;
    for (std::size_t i = 0; i < n; ++i) values[i * d + j] = col[i];
  }
  return FeatureMatrix(d, std::move(values), ds.y(), frame.ColumnNames());
}

std::size_t FeatureMatrix::CountLabel(std::uint8_t label) const {
  std::size_t n = 0;
  for (auto l : labels_) n += (l == label) ? 1 : 0;
  return n;
}

std::uint8_t FeatureMatrix::MinorityLabel() const {
  return CountLabel(0) < CountLabel(1) ? 0 : 1;
}

std::vector<double> FeatureMatrix::StandardizedRow(std::size_t i) const {
  std::vector<double> out(num_features_);
  for (std::size_t j = 0; j < num_features_; ++j) {
    out[j] = (at(i, j) - scale_[j].mean) / scale_[j].std;
  }
  return out;
}

std::vector<double> FeatureMatrix::Standardized() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < num_features_; ++j) {
      out[i * num_features_ + j] = (at(i, j) - scale_[j].mean) / scale_[j].std;
    }
  }
  return out;
}

FeatureMatrix FeatureMatrix::SelectRows(std::span<const std::size_t> rows) const {
  std::vector<double> values;
  std::vector<std::uint8_t> labels;
  values.reserve(rows.size() * num_features_);
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    labels.push_back(labels_.at(r));
  }
  return FeatureMatrix(num_features_, std::move(values), std::move(labels), feature_names_);
}

FeatureMatrix FeatureMatrix::SelectColumns(std::span<const std::size_t> columns) const {
  std::vector<double> values;
  values.reserve(rows() * columns.size());
  std::vector<std::string> names;
  for (std::size_t c : columns) names.push_back(feature_names_.at(c));
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t c : columns) values.push_back(at(i, c));
  }
  return FeatureMatrix(columns.size(), std::move(values), labels_, std::move(names));
}

}  // namespace enrich
