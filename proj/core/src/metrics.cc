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

#include "enrich/metrics.h"

#include "enrich/error.h"

namespace enrich {
namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics ForClass(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.precision = Ratio(tp, tp + fp);
  m.recall = Ratio(tp, tp + fn);
  m.f1 = F1Score(m.precision, m.recall);
  m.support = tp + fn;
  return m;
}

nlohmann::json ClassJson(const ClassMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
}

}  // namespace

ConfusionMatrix Confusion(std::span<const std::uint8_t> y_true,
                          std::span<const std::uint8_t> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw InvalidArgument("label vectors differ in length");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] != 0;
    const bool p = y_pred[i] != 0;
    if (t && p) ++cm.tp;
    else if (!t && p) ++cm.fp;
    else if (t && !p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

double F1Score(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

EvaluationReport ComputeMetrics(const ConfusionMatrix& cm) {
  EvaluationReport r;
  r.confusion = cm;
  r.positive = ForClass(cm.tp, cm.fp, cm.fn);
  r.negative = ForClass(cm.tn, cm.fn, cm.fp);
  const std::size_t n = cm.total();
  r.accuracy = Ratio(cm.tp + cm.tn, n);
  r.macro.precision = 0.5 * (r.positive.precision + r.negative.precision);
  r.macro.recall = 0.5 * (r.positive.recall + r.negative.recall);
  r.macro.f1 = 0.5 * (r.positive.f1 + r.negative.f1);
  r.macro.support = n;
  if (n > 0) {
    const double wp = static_cast<double>(r.positive.support) / static_cast<double>(n);
    const double wn = static_cast<double>(r.negative.support) / static_cast<double>(n);
    r.weighted.precision = wp * r.positive.precision + wn * r.negative.precision;
    r.weighted.recall = wp * r.positive.recall + wn * r.negative.recall;
    r.weighted.f1 = wp * r.positive.f1 + wn * r.negative.f1;
  }
  r.weighted.support = n;
  return r;
}

nlohmann::json EvaluationReport::ToJson() const {
  return {{"class_0", ClassJson(negative)},
          {"class_1", ClassJson(positive)},
          {"macro", ClassJson(macro)},
          {"weighted", ClassJson(weighted)},
          {"accuracy", accuracy},
          {"support", confusion.total()},
          {"confusion", {{"tp", confusion.tp}, {"fp", confusion.fp}, {"fn", confusion.fn}, {"tn", confusion.tn}}},
          {"fingerprint", fingerprint}};
}

}  // namespace enrich
