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

#include <gtest/gtest.h>

#include "enrich/augmentation.h"
#include "enrich/error.h"
#include "enrich/forward_selection.h"
#include "enrich/metrics.h"
#include "enrich/random.h"
#include "enrich/report.h"
#include "test_util.h"

namespace enrich {
namespace {

using Labels = std::vector<std::uint8_t>;

TEST(ConfusionTest, HandCases) {
  const Labels y = {1, 0, 1, 0, 1, 0};
  const ConfusionMatrix perfect = Confusion(y, y);
  EXPECT_EQ(perfect.fp, 0u);
  EXPECT_EQ(perfect.fn, 0u);
  const ConfusionMatrix zero = Confusion(y, Labels(6, 0));
  EXPECT_EQ(zero.fn, 3u);
  EXPECT_EQ(zero.tn, 3u);
  EXPECT_THROW(Confusion(y, Labels(5, 0)), InvalidArgument);
}

TEST(ConfusionTest, MatchesPairCounting) {
  Rng rng(3);
  Labels a(500), b(500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.Below(2);
    b[i] = rng.Below(2);
  }
  std::size_t counts[2][2] = {};
  for (std::size_t i = 0; i < a.size(); ++i) ++counts[a[i]][b[i]];
  const ConfusionMatrix cm = Confusion(a, b);
  EXPECT_EQ(cm.tp, counts[1][1]);
  EXPECT_EQ(cm.fp, counts[0][1]);
  EXPECT_EQ(cm.fn, counts[1][0]);
  EXPECT_EQ(cm.tn, counts[0][0]);
}

TEST(MetricsTest, HandArithmetic) {
  const EvaluationReport r = ComputeMetrics({1, 1, 1, 97});
  EXPECT_DOUBLE_EQ(r.positive.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.positive.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.positive.f1, 0.5);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.98);
  EXPECT_EQ(r.positive.support, 2u);
  EXPECT_EQ(r.negative.support, 98u);
  EXPECT_DOUBLE_EQ(r.negative.precision, 97.0 / 98.0);
  EXPECT_DOUBLE_EQ(r.macro.f1, (0.5 + 97.0 / 98.0) / 2.0);
}

TEST(MetricsTest, ZeroDivision) {
  const EvaluationReport r = ComputeMetrics({0, 0, 3, 97});
  EXPECT_EQ(r.positive.precision, 0.0);
  EXPECT_EQ(r.positive.recall, 0.0);
  EXPECT_EQ(r.positive.f1, 0.0);
  EXPECT_EQ(F1Score(0, 0), 0.0);
}

TEST(MetricsTest, AllCorrect) {
  const EvaluationReport r = ComputeMetrics({4, 0, 0, 6});
  for (const ClassMetrics* m : {&r.positive, &r.negative, &r.macro, &r.weighted}) {
    EXPECT_EQ(m->precision, 1.0);
    EXPECT_EQ(m->recall, 1.0);
    EXPECT_EQ(m->f1, 1.0);
  }
  EXPECT_EQ(r.accuracy, 1.0);
  const auto j = r.ToJson();
  EXPECT_TRUE(j.contains("class_0"));
  EXPECT_TRUE(j.contains("weighted"));
}

// Label is x one step back crossing 1, so only the lag family carries signal.
std::pair<LabeledDataset, LabeledDataset> LagToy() {
  const std::size_t n = 2000;
  const std::vector<double> x = testing::RandomSeries(n, 42);
  Labels y(n, 0);
  for (std::size_t t = 1; t < n; ++t) y[t] = x[t - 1] > 1.0;
  LabeledDataset ds = testing::MakeDataset({x}, y);
  std::vector<std::size_t> train(1500), valid(500);
  for (std::size_t i = 0; i < 1500; ++i) train[i] = i;
  for (std::size_t i = 0; i < 500; ++i) valid[i] = 1500 + i;
  return {ds.SelectRows(train), ds.SelectRows(valid)};
}

TEST(ForwardSelectionTest, PicksInformativeFamily) {
  auto [train, valid] = LagToy();
  const std::vector<FamilySpec> families = {{Family::kReverse, {}}, {Family::kLag, {}}};
  GbdtParams p;
  p.n_rounds = 20;
  const ForwardSelectionResult r = ForwardSelectAugmentations(train, valid, families, p);
  EXPECT_EQ(r.selected, std::vector<std::size_t>{1});
  EXPECT_EQ(r.trace.size(), 3u);
  ASSERT_EQ(r.path_scores.size(), 2u);
  EXPECT_GT(r.path_scores[1], r.path_scores[0]);
}

TEST(ForwardSelectionTest, UnreachableEpsilon) {
  auto [train, valid] = LagToy();
  GbdtParams p;
  p.n_rounds = 5;
  const auto r =
      ForwardSelectAugmentations(train, valid, {{Family::kReverse, {}}, {Family::kLag, {}}}, p, 1.0);
  EXPECT_TRUE(r.selected.empty());
  EXPECT_EQ(r.trace.size(), 2u);
}

TEST(ForwardSelectionTest, Preconditions) {
  auto [train, valid] = LagToy();
  EXPECT_THROW(ForwardSelectAugmentations(train, valid, {}, {}), InvalidArgument);
  LabeledDataset no_pos = testing::MakeDataset({{1, 2, 3, 4}}, {0, 0, 0, 0});
  EXPECT_THROW(ForwardSelectAugmentations(train, no_pos, {{Family::kLag, {}}}, {}),
               InvalidArgument);
}

TEST(CompareReportsTest, SingleColumn) {
  const ComparisonTable t = CompareReports({{"only", ComputeMetrics({1, 1, 1, 97})}});
  EXPECT_EQ(t.labels, std::vector<std::string>{"only"});
  EXPECT_EQ(t.rows.size(), 13u);
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.values.size(), 1u);
    EXPECT_TRUE(row.bold[0]);
  }
  EXPECT_EQ(t.support[0], "100 (98+2)");
}

TEST(CompareReportsTest, BoldMatchesArgmax) {
  const std::vector<std::pair<std::string, EvaluationReport>> in = {
      {"a", ComputeMetrics({1, 1, 1, 97})},
      {"b", ComputeMetrics({2, 5, 0, 93})},
      {"c", ComputeMetrics({0, 0, 2, 98})}};
  const ComparisonTable t = CompareReports(in);
  for (const auto& row : t.rows) {
    double best = row.values[0];
    for (double v : row.values) best = std::max(best, v);
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      EXPECT_EQ(row.bold[c], row.values[c] == best) << row.metric;
    }
  }
  EXPECT_NE(t.ToCsv().find("**"), std::string::npos);
  EXPECT_EQ(t.ToJson()["labels"].size(), 3u);
}

TEST(CompareReportsTest, EmptyAndDuplicateLabels) {
  EXPECT_THROW(CompareReports({}), InvalidArgument);
  const EvaluationReport r = ComputeMetrics({1, 1, 1, 1});
  EXPECT_THROW(CompareReports({{"a", r}, {"a", r}}), InvalidArgument);
}

TEST(WriteFileAtomicTest, RoundTrip) {
  const auto dir = testing::TempDir("atomic");
  WriteFileAtomic(dir / "f.txt", "hello\n");
  EXPECT_EQ(ReadFile(dir / "f.txt"), "hello\n");
  WriteFileAtomic(dir / "f.txt", "bye");
  EXPECT_EQ(ReadFile(dir / "f.txt"), "bye");
}

}  // namespace
}  // namespace enrich
