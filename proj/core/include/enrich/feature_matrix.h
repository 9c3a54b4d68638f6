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

#ifndef ENRICH_FEATURE_MATRIX_H_
#define ENRICH_FEATURE_MATRIX_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "enrich/frame.h"

namespace enrich {

struct ColumnScale {
  double mean = 0.0;
  double std = 1.0;  // 1.0 substituted for constant columns
};

// Dense row-major n x d matrix with binary labels and the per-column z-score
// scaling used for every distance computation.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t num_features, std::vector<double> values,
                std::vector<std::uint8_t> labels,
                std::vector<std::string> feature_names = {});

  // Null-free dataset only.
  static FeatureMatrix FromDataset(const LabeledDataset& ds);

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return num_features_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * num_features_, num_features_};
  }
  double at(std::size_t i, std::size_t j) const {
    return values_[i * num_features_ + j];
  }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<ColumnScale>& standardization() const { return scale_; }

  std::size_t CountLabel(std::uint8_t label) const;
  // Label with fewer rows; ties resolve to 1.
  std::uint8_t MinorityLabel() const;

  // Row i with standardization applied.
  std::vector<double> StandardizedRow(std::size_t i) const;
  // Full standardized copy, row-major.
  std::vector<double> Standardized() const;

  FeatureMatrix SelectRows(std::span<const std::size_t> rows) const;
  FeatureMatrix SelectColumns(std::span<const std::size_t> columns) const;

 private:
  std::size_t num_features_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::string> feature_names_;
  std::vector<ColumnScale> scale_;
};

}  // namespace enrich

#endif  // ENRICH_FEATURE_MATRIX_H_
