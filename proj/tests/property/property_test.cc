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

// Randomized invariant checks, one suite per module. Each property runs over
// a fixed set of seeds so failures are reproducible.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <span>
#include <set>

#include "enrich/augmentation.h"
#include "enrich/cross_validation.h"
#include "enrich/csv.h"
#include "enrich/dataset.h"
#include "enrich/error.h"
#include "enrich/forward_selection.h"
#include "enrich/gbdt.h"
#include "enrich/imputation.h"
#include "enrich/metrics.h"
#include "enrich/pipeline.h"
#include "enrich/pipeline_config.h"
#include "enrich/random.h"
#include "enrich/report.h"
#include "enrich/sampling.h"
#include "enrich/synthetic.h"
#include "test_util.h"

namespace enrich {
namespace {

using V = std::vector<double>;
using Labels = std::vector<std::uint8_t>;

Labels RandomLabels(std::size_t n, double p, Rng& rng) {
  Labels y(n);
  for (auto& v : y) v = rng.Uniform() < p;
  return y;
}

std::multiset<std::size_t> Ids(const LabeledDataset& ds) {
  return {ds.row_ids().begin(), ds.row_ids().end()};
}

// ---------------------------------------------------------------- dataset

TEST(DatasetProperty, SplitsPartitionRows) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 10 + rng.Below(300);
    LabeledDataset ds = testing::LabelsOnly(RandomLabels(n, 0.2, rng));
    std::multiset<std::size_t> all = Ids(ds);
    for (const SplitResult& s : {SplitRandom(ds, 0.3, seed, true), SplitRandom(ds, 0.3, seed, false),
                                 SplitTimeBased(ds, 0.7)}) {
      std::multiset<std::size_t> joined = Ids(s.train);
      for (std::size_t id : s.test.row_ids()) {
        ASSERT_EQ(joined.count(id), 0u) << "seed " << seed;
        joined.insert(id);
      }
      ASSERT_EQ(joined, all) << "seed " << seed;
    }
  }
}

TEST(DatasetProperty, TimeSplitIsOrdered) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    LabeledDataset ds = testing::LabelsOnly(RandomLabels(5 + rng.Below(500), 0.1, rng));
    const SplitResult s = SplitTimeBased(ds, 0.05 + 0.9 * rng.Uniform());
    if (s.train_indices.empty() || s.test_indices.empty()) continue;
    ASSERT_LT(*std::max_element(s.train_indices.begin(), s.train_indices.end()),
              *std::min_element(s.test_indices.begin(), s.test_indices.end()));
  }
}

TEST(DatasetProperty, CurveShiftCounts) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + rng.Below(400);
    const Labels y = RandomLabels(n, 0.03 + 0.2 * rng.Uniform(), rng);
    const int k = 1 + static_cast<int>(rng.Below(8));
    LabeledDataset out = CurveShift(testing::LabelsOnly(y), k);
    // Each event (maximal positive run) relabels the negatives between the
    // previous event and its start, capped at k.
    std::size_t expected = 0, positives = 0;
    long prev_end = -1;
    for (std::size_t t = 0; t < n; ++t) {
      positives += y[t];
      if (y[t] && (t == 0 || !y[t - 1])) {
        expected += std::min<std::size_t>(k, static_cast<std::size_t>(static_cast<long>(t) - prev_end - 1));
      }
      if (y[t]) prev_end = static_cast<long>(t);
    }
    ASSERT_EQ(out.positive_count(), expected) << "seed " << seed;
    ASSERT_EQ(out.length(), n - positives);
  }
}

TEST(DatasetProperty, CurveShiftIsolatedEvents) {
  Labels y(500, 0);
  for (std::size_t t = 20; t < 500; t += 25) y[t] = 1;
  for (int k = 1; k <= 10; ++k) {
    EXPECT_EQ(CurveShift(testing::LabelsOnly(y), k).positive_count(), 20u * k);
  }
}

TEST(DatasetProperty, DeriveRarityProvenance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const VibrationSource src = GenerateVibration(3000, 500, {}, seed);
    const LabeledDataset ds = DeriveRarity(src.normal, src.fault, 0.01 + 0.04 * (seed % 5), 2000, seed);
    for (std::size_t i = 0; i < ds.length(); ++i) {
      const TimeSeriesFrame& from = ds.y()[i] ? src.fault : src.normal;
      for (std::size_t j = 0; j < ds.frame().num_columns(); ++j) {
        ASSERT_EQ(ds.frame().column(j).values[i], from.column(j).values[ds.row_ids()[i]]);
      }
    }
  }
}

TEST(DatasetProperty, DownsampleFactorOneIsIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const std::size_t n = 1 + rng.Below(200);
    LabeledDataset ds = testing::MakeDataset({testing::RandomSeries(n, seed), testing::RandomSeries(n, seed + 1)},
                                             RandomLabels(n, 0.1, rng));
    for (Aggregator a : {Aggregator::kMean, Aggregator::kFirst}) {
      LabeledDataset out = Downsample(ds, 1, a);
      ASSERT_EQ(out.y(), ds.y());
      for (std::size_t j = 0; j < 2; ++j) ASSERT_EQ(out.frame().column(j).values, ds.frame().column(j).values);
    }
  }
}

// ----------------------------------------------------------- augmentation

std::vector<V> ApplyAll(const V& x, std::uint64_t seed) {
  const int n = static_cast<int>(x.size());
  std::vector<V> out = {RelativeChange(x), ExpandingMean(x), Convolve(x, n >= 3 ? 3 : 1), Pool(x, 4),
                        RollingMean(x, std::min(5, n)), Drift(x, 0.1, 5, seed),
                        Quantize(x, 10), Reverse(x), AddNoise(x, 0.1, seed)};
  if (n >= 2) {
    out.push_back(Lag(x, 1));
    out.push_back(TimeWarp(x, 2.0, 3, seed));
  }
  if (n >= 24) {
    const Decomposition d = Decompose(x, 12);
    out.push_back(d.trend);
    out.push_back(d.seasonal);
    out.push_back(d.residual);
  }
  return out;
}

TEST(AugmentationProperty, LengthPreserved) {
  for (std::size_t n = 1; n <= 1000; n += (n < 40 ? 1 : 37)) {
    const V x = testing::RandomSeries(n, n, 5.0);
    for (const V& y : ApplyAll(x, n)) ASSERT_EQ(y.size(), n);
  }
}

TEST(AugmentationProperty, IdentityParameterizations) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const V x = testing::RandomSeries(1 + seed * 13, seed);
    EXPECT_EQ(RollingMean(x, 1), x);
    EXPECT_EQ(Pool(x, 1), x);
    EXPECT_EQ(Convolve(x, 1), x);
    EXPECT_EQ(Drift(x, 0.0, 5, seed), x);
    if (x.size() >= 2) {
      EXPECT_EQ(TimeWarp(x, 1.0, 3, seed), x);
      EXPECT_EQ(TimeWarp(x, 2.0, 0, seed), x);
    }
    EXPECT_EQ(AddNoise(x, 0.0, seed), x);
    EXPECT_EQ(Reverse(Reverse(x)), x);
  }
}

TEST(AugmentationProperty, Deterministic) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const V x = testing::RandomSeries(50 + seed, seed);
    EXPECT_EQ(ApplyAll(x, seed), ApplyAll(x, seed));
  }
}

TEST(AugmentationProperty, QuantizePoolExpanding) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const V x = testing::RandomSeries(1 + rng.Below(300), seed, 10.0);
    const int levels = 2 + static_cast<int>(rng.Below(10));
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    std::set<double> level_set;
    for (int i = 0; i < levels; ++i) level_set.insert(*lo + (*hi - *lo) * i / (levels - 1));
    for (double v : Quantize(x, levels)) {
      bool found = false;
      for (double l : level_set) found |= std::abs(v - l) <= 1e-12 * std::max(1.0, std::abs(l));
      ASSERT_TRUE(found) << v;
    }
    const std::size_t p = 1 + rng.Below(7);
    const V pooled = Pool(x, static_cast<int>(p));
    for (std::size_t t = 0; t < x.size(); ++t) ASSERT_EQ(pooled[t], pooled[t - t % p]);
    const V e = ExpandingMean(x);
    double sum = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      sum += x[t];
      const double oracle = sum / static_cast<double>(t + 1);
      ASSERT_LE(std::abs(e[t] - oracle), 1e-12 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST(AugmentationProperty, DecomposeReconstructs) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const int period = 2 + static_cast<int>(rng.Below(20));
    const std::size_t n = 2 * period + rng.Below(400);
    const V x = testing::RandomSeries(n, seed, 3.0);
    const Decomposition d = Decompose(x, period);
    for (std::size_t t = 0; t < n; ++t) {
      ASSERT_LT(std::abs(d.trend[t] + d.seasonal[t] + d.residual[t] - x[t]), 1e-9);
    }
    for (std::size_t s = 0; s + period <= n; s += period) {
      double sum = 0;
      for (int j = 0; j < period; ++j) sum += d.seasonal[s + j];
      ASSERT_LT(std::abs(sum), 1e-9);
    }
  }
}

TEST(AugmentationProperty, AugmentFrameKeepsSourceColumns) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    LabeledDataset ds = testing::MakeDataset(
        {testing::RandomSeries(120, seed), testing::RandomSeries(120, seed + 50)}, Labels(120, 0));
    AugmentationSpec spec{{}, seed};
    for (Family f : kAllFamilies) {
      FamilySpec fs{f, {}};
      fs.params.period = 12;
      spec.families.push_back(fs);
    }
    LabeledDataset out = AugmentFrame(ds, spec);
    ASSERT_EQ(out.frame().num_columns(), 2u * (1 + std::size(kAllFamilies)));
    for (std::size_t j = 0; j < 2; ++j) {
      ASSERT_EQ(std::memcmp(out.frame().column(j).values.data(), ds.frame().column(j).values.data(),
                            120 * sizeof(double)),
                0);
    }
    ASSERT_EQ(out.y(), ds.y());
  }
}

// --------------------------------------------------------------- sampling

std::set<std::size_t> RemovedSet(const ResampleResult& r) {
  std::set<std::size_t> s;
  for (const auto& rm : r.removed) s.insert(rm.index);
  return s;
}

std::vector<double> Distances(const FeatureMatrix& m) {
  const std::size_t n = m.rows(), d = m.cols();
  std::vector<double> mean(d), sd(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) mean[j] += m.at(i, j) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) sd[j] += std::pow(m.at(i, j) - mean[j], 2);
    sd[j] = sd[j] > 0 ? std::sqrt(sd[j]) : 1.0;
  }
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t j = 0; j < d; ++j) dist[a * n + b] += std::pow((m.at(a, j) - m.at(b, j)) / sd[j], 2);
  return dist;
}

std::vector<std::size_t> Nearest(const std::vector<double>& dist, std::size_t n, std::size_t i, int k) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return dist[i * n + a] < dist[i * n + b]; });
  idx.resize(k);
  return idx;
}

TEST(SamplingProperty, RowAccountingAndHull) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const std::size_t n = 30 + rng.Below(150);
    FeatureMatrix m = testing::RandomMatrix(n, 1 + rng.Below(4), 3 + rng.Below(n / 4), 0.8, seed);
    const std::vector<ResampleResult> results = {
        Smote(m, 1.0, 5, seed), TomekLinks(m), EditedNearestNeighbours(m, 3), Adasyn(m, 1.0, 5, seed),
        SmoteTomek(m, 1.0, 5, seed), SmoteEnn(m, 1.0, 5, 3, seed)};
    for (std::size_t r = 0; r < results.size(); ++r) {
      const ResampleResult& res = results[r];
      ASSERT_EQ(res.matrix.rows(), m.rows() + res.synthetic_count - res.removed.size()) << r;
      if (r == 0 || r == 3) ASSERT_TRUE(res.removed.empty());
      if (r == 1 || r == 2) ASSERT_EQ(res.synthetic_count, 0u);
      ASSERT_EQ(res.provenance.size(), res.matrix.rows());
      for (std::size_t i = 0; i < res.matrix.rows(); ++i) {
        const RowOrigin& o = res.provenance[i];
        if (o.kind == RowOrigin::Kind::kOriginal) {
          for (std::size_t j = 0; j < m.cols(); ++j) ASSERT_EQ(res.matrix.at(i, j), m.at(o.source, j));
          continue;
        }
        ASSERT_GE(o.lambda, 0.0);
        ASSERT_LE(o.lambda, 1.0);
        ASSERT_EQ(m.labels()[o.source], m.MinorityLabel());
        ASSERT_EQ(m.labels()[o.neighbor], m.MinorityLabel());
        for (std::size_t j = 0; j < m.cols(); ++j) {
          const double a = m.at(o.source, j), b = m.at(o.neighbor, j);
          ASSERT_NEAR(res.matrix.at(i, j), a + o.lambda * (b - a), 1e-12);
        }
      }
    }
  }
}

TEST(SamplingProperty, RemovalSetsMatchExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    const std::size_t n = 10 + rng.Below(191);
    FeatureMatrix m = testing::RandomMatrix(n, 1 + rng.Below(3), 2 + rng.Below(n / 2), 0.6, seed);
    const auto dist = Distances(m);
    const std::uint8_t minority = m.MinorityLabel();
    std::set<std::size_t> tomek, enn;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = Nearest(dist, n, i, 1)[0];
      if (m.labels()[i] != m.labels()[j] && Nearest(dist, n, j, 1)[0] == i) {
        tomek.insert(m.labels()[i] == minority ? j : i);
      }
      int other = 0;
      for (std::size_t nb : Nearest(dist, n, i, 3)) other += m.labels()[nb] != m.labels()[i];
      if (2 * other > 3) enn.insert(i);
    }
    ASSERT_EQ(RemovedSet(TomekLinks(m)), tomek) << "seed " << seed;
    ASSERT_EQ(RemovedSet(EditedNearestNeighbours(m, 3)), enn) << "seed " << seed;
  }
}

TEST(SamplingProperty, AffineColumnScalingInvariance) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const std::size_t d = 1 + rng.Below(4);
    FeatureMatrix m = testing::RandomMatrix(80, d, 20, 0.5, seed);
    const std::size_t col = rng.Below(d);
    // Power-of-two scale keeps standardized values bit-identical.
    const double scale = std::ldexp(1.0, static_cast<int>(rng.Below(10)) - 5);
    std::vector<double> v = m.values();
    for (std::size_t i = 0; i < m.rows(); ++i) v[i * d + col] *= scale;
    FeatureMatrix scaled(d, v, m.labels());
    for (std::size_t i = 0; i < m.rows(); i += 7) ASSERT_EQ(Knn(m, i, 5), Knn(scaled, i, 5));
    ASSERT_EQ(RemovedSet(TomekLinks(m)), RemovedSet(TomekLinks(scaled)));
    ASSERT_EQ(RemovedSet(EditedNearestNeighbours(m)), RemovedSet(EditedNearestNeighbours(scaled)));
    // General affine maps agree up to floating-point ties.
    const double a = 0.5 + 9.5 * rng.Uniform(), b = 100.0 * rng.Normal();
    for (std::size_t i = 0; i < m.rows(); ++i) v[i * d + col] = a * m.values()[i * d + col] + b;
    FeatureMatrix affine(d, v, m.labels());
    ASSERT_EQ(RemovedSet(TomekLinks(m)), RemovedSet(TomekLinks(affine)));
    ASSERT_EQ(RemovedSet(EditedNearestNeighbours(m)), RemovedSet(EditedNearestNeighbours(affine)));
  }
}

TEST(SamplingProperty, Deterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FeatureMatrix m = testing::RandomMatrix(100, 3, 15, 0.7, seed);
    ASSERT_EQ(Smote(m, 0.8, 5, seed).matrix.values(), Smote(m, 0.8, 5, seed).matrix.values());
    ASSERT_EQ(Adasyn(m, 1.0, 5, seed).matrix.values(), Adasyn(m, 1.0, 5, seed).matrix.values());
    ASSERT_EQ(SmoteEnn(m, 1.0, 5, 3, seed).matrix.values(), SmoteEnn(m, 1.0, 5, 3, seed).matrix.values());
    ASSERT_EQ(SmoteTomek(m, 1.0, 5, seed).matrix.values(), SmoteTomek(m, 1.0, 5, seed).matrix.values());
  }
}

// ------------------------------------------------------------- imputation

TimeSeriesFrame NullyFrame(std::uint64_t seed, std::size_t n, double zero_share) {
  Rng rng(seed);
  std::vector<Column> cols;
  for (int c = 0; c < 3; ++c) {
    V v = testing::RandomSeries(n, seed * 7 + c, 5.0);
    for (double& x : v) {
      x += 20;
      const double u = rng.Uniform();
      if (u < 0.2) x = kNull;
      else if (u < 0.2 + zero_share) x = 0;
    }
    cols.push_back({"c" + std::to_string(c), v});
  }
  return TimeSeriesFrame(cols);
}

TEST(ImputationProperty, NullCountsAfterImputation) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TimeSeriesFrame f = NullyFrame(seed, 10 + seed * 3, seed % 2 ? 0.004 : 0.0);
    EXPECT_EQ(ImputeZero(f).first.NullCount(), 0u);
    const TimeSeriesFrame r = ImputeRollingMean(f, 2 + static_cast<int>(seed % 6)).first;
    for (std::size_t j = 0; j < f.num_columns(); ++j) {
      std::size_t nulls = 0;
      for (double v : r.column(j).values) nulls += IsNull(v);
      ASSERT_EQ(nulls, IsNull(f.column(j).values[0]) ? 1u : 0u) << "seed " << seed;
    }
  }
}

TEST(ImputationProperty, ObservedCellsUntouchedAndFillsInRange) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TimeSeriesFrame f = NullyFrame(seed, 20 + seed * 5, 0.005);
    for (const TimeSeriesFrame& out : {ImputeZero(f).first, ImputeRollingMean(f, 3).first}) {
      for (std::size_t j = 0; j < f.num_columns(); ++j) {
        const V& in = f.column(j).values;
        double lo = INFINITY, hi = -INFINITY;
        for (double v : in) {
          if (!IsNull(v)) lo = std::min(lo, v), hi = std::max(hi, v);
        }
        for (std::size_t t = 0; t < in.size(); ++t) {
          const double v = out.column(j).values[t];
          if (!IsNull(in[t]) && in[t] != 0) {
            ASSERT_EQ(std::memcmp(&v, &in[t], sizeof v), 0);
          } else if (!IsNull(v) && &out != nullptr) {
            ASSERT_GE(v, std::min(lo, 0.0) - 1e-12);
            ASSERT_LE(v, hi + 1e-12);
          }
        }
      }
    }
    // Rolling fills are means of observed values, so they stay inside the
    // observed non-zero range when zeros count as missing.
    const auto [rolled, report] = ImputeRollingMean(f, 3);
    for (std::size_t j = 0; j < f.num_columns(); ++j) {
      const V& in = f.column(j).values;
      const bool zeros_missing = std::count(report.zero_as_missing.begin(), report.zero_as_missing.end(),
                                            f.column(j).name) > 0;
      double lo = INFINITY, hi = -INFINITY;
      for (double v : in) {
        if (!IsNull(v) && !(zeros_missing && v == 0)) lo = std::min(lo, v), hi = std::max(hi, v);
      }
      for (std::size_t t = 1; t < in.size(); ++t) {
        if (IsNull(in[t]) || (zeros_missing && in[t] == 0)) {
          ASSERT_GE(rolled.column(j).values[t], lo - 1e-9);
          ASSERT_LE(rolled.column(j).values[t], hi + 1e-9);
        }
      }
    }
  }
}

TEST(ImputationProperty, Idempotence) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const TimeSeriesFrame f = NullyFrame(seed, 30 + seed, 0.004);
    const TimeSeriesFrame z = ImputeZero(f).first;
    ASSERT_EQ(ImputeZero(z).first.columns()[0].values, z.columns()[0].values);
    const TimeSeriesFrame r = ImputeRollingMean(f, 3).first;
    const TimeSeriesFrame rr = ImputeRollingMean(r, 3).first;
    for (std::size_t j = 0; j < f.num_columns(); ++j) {
      const V& a = r.column(j).values;
      const V& b = rr.column(j).values;
      for (std::size_t t = 0; t < a.size(); ++t) {
        ASSERT_TRUE((IsNull(a[t]) && IsNull(b[t])) || a[t] == b[t]) << "seed " << seed;
      }
    }
  }
}

// ------------------------------------------------------------------ model

TEST(ModelProperty, DerivativesMatchFiniteDifferences) {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const std::uint8_t y = rng.Below(2);
    const double m = std::clamp(4.0 * rng.Normal(), -10.0, 10.0);
    const double w = 0.1 + 10.0 * rng.Uniform();
    const double h = 1e-5;
    const double g_fd = (WeightedLogLoss(y, m + h, w) - WeightedLogLoss(y, m - h, w)) / (2 * h);
    const LossDerivatives d = LogLossDerivatives(y, m, w);
    ASSERT_LE(std::abs(d.gradient - g_fd), 1e-6 * std::max(std::abs(g_fd), 1e-3)) << m;
    // Hessian against a central difference of the (checked) gradient.
    const double h_fd =
        (LogLossDerivatives(y, m + h, w).gradient - LogLossDerivatives(y, m - h, w).gradient) / (2 * h);
    ASSERT_LE(std::abs(d.hessian - h_fd), 1e-6 * std::max(h_fd, 1e-3)) << m;
  }
}

void CheckCover(const Tree& t, int node) {
  const TreeNode& n = t.nodes[node];
  if (n.is_leaf()) {
    ASSERT_TRUE(std::isfinite(n.weight));
    return;
  }
  ASSERT_GE(n.right, 0);
  ASSERT_NEAR(n.cover, t.nodes[n.left].cover + t.nodes[n.right].cover, 1e-9 * std::max(1.0, n.cover));
  CheckCover(t, n.left);
  CheckCover(t, n.right);
}

TEST(ModelProperty, MonotoneLossCoverAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Rng rng(seed);
    FeatureMatrix x = testing::RandomMatrix(200 + rng.Below(200), 1 + rng.Below(5), 20 + rng.Below(60), 0.7, seed);
    GbdtParams p;
    p.n_rounds = 25;
    p.max_depth = 1 + static_cast<int>(rng.Below(4));
    p.learning_rate = 0.1 + 0.5 * rng.Uniform();
    p.alpha = rng.Below(2);
    p.scale_pos_weight = 1 + 5 * rng.Uniform();
    p.seed = seed;
    const GbdtModel m = TrainGbdt(x, p);
    double prev = TrainingLogLoss(m, x, 0);
    for (std::size_t r = 1; r <= m.trees.size(); ++r) {
      const double cur = TrainingLogLoss(m, x, r);
      ASSERT_LE(cur, prev + 1e-12) << "seed " << seed << " round " << r;
      prev = cur;
    }
    for (const Tree& t : m.trees) CheckCover(t, 0);
    ASSERT_EQ(TrainGbdt(x, p).Serialize(), m.Serialize());
    p.subsample = 0.7;
    ASSERT_EQ(TrainGbdt(x, p).Serialize(), TrainGbdt(x, p).Serialize());
  }
}

TEST(ModelProperty, RecallNonDecreasingInScalePosWeight) {
  FeatureMatrix x = testing::RandomMatrix(1500, 2, 30, 1.2, 77);
  GbdtParams p;
  p.n_rounds = 20;
  p.max_depth = 2;
  double prev = -1;
  for (double spw = 1; spw <= 64; spw *= 2) {
    p.scale_pos_weight = spw;
    const auto pred = PredictLabel(TrainGbdt(x, p).PredictProba(x));
    std::size_t tp = 0;
    for (std::size_t i = 0; i < 30; ++i) tp += pred[i];
    const double recall = tp / 30.0;
    EXPECT_GE(recall, prev) << "spw " << spw;
    prev = recall;
  }
}

TEST(ModelProperty, ShuffledLabelsGiveChanceMacroF1) {
  FeatureMatrix x = testing::RandomMatrix(400, 3, 200, 1.5, 5);
  Labels y = x.labels();
  Rng rng(9);
  rng.Shuffle(std::span<std::uint8_t>(y));
  FeatureMatrix shuffled(3, x.values(), y);
  GbdtParams p;
  p.n_rounds = 20;
  const auto r = GridSearch(shuffled, {{"max_depth", {3}}}, {5, 3, 2, Scoring::kMacroF1}, p);
  EXPECT_NEAR(r.mean_scores[0], 0.5, 0.1);
  const auto real = GridSearch(x, {{"max_depth", {3}}}, {5, 3, 2, Scoring::kMacroF1}, p);
  EXPECT_GT(real.mean_scores[0], 0.7);
}

// ------------------------------------------------------------- evaluation

TEST(EvaluationProperty, MetricIdentities) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.Below(300);
    Labels y = RandomLabels(n, 0.05 + 0.9 * rng.Uniform(), rng);
    y[0] = 0;
    y[1] = 1;
    const EvaluationReport self = ComputeMetrics(Confusion(y, y));
    for (const ClassMetrics* m : {&self.positive, &self.negative, &self.macro, &self.weighted}) {
      ASSERT_EQ(m->precision, 1.0);
      ASSERT_EQ(m->recall, 1.0);
      ASSERT_EQ(m->f1, 1.0);
    }
    const Labels pred = RandomLabels(n, rng.Uniform(), rng);
    const ConfusionMatrix cm = Confusion(y, pred);
    const EvaluationReport r = ComputeMetrics(cm);
    ASSERT_EQ(r.accuracy, static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n));
    ASSERT_NEAR(r.weighted.recall, r.accuracy, 1e-12);
    ASSERT_NEAR(r.macro.f1, (r.positive.f1 + r.negative.f1) / 2, 1e-15);
    Labels y_sw = y, pred_sw = pred;
    for (auto& v : y_sw) v = !v;
    for (auto& v : pred_sw) v = !v;
    ASSERT_NEAR(ComputeMetrics(Confusion(y_sw, pred_sw)).macro.f1, r.macro.f1, 1e-15);
    for (double v : {r.positive.precision, r.positive.recall, r.positive.f1, r.negative.f1,
                     r.macro.precision, r.weighted.f1, r.accuracy}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(EvaluationProperty, ForwardSelectionDeterministicAndMonotone) {
  const LabeledDataset ds = LeadingSignatureDataset(3000, 40, 2, 3);
  LabeledDataset shifted = CurveShift(ds, 2);
  const SplitResult s = SplitTimeBased(shifted, 0.6);
  const std::vector<FamilySpec> fams = {{Family::kReverse, {}}, {Family::kLag, {}},
                                        {Family::kRelativeChange, {}}, {Family::kConvolve, {}}};
  GbdtParams p;
  p.n_rounds = 20;
  const auto a = ForwardSelectAugmentations(s.train, s.test, fams, p, 0.001, 4);
  const auto b = ForwardSelectAugmentations(s.train, s.test, fams, p, 0.001, 4);
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.path_scores, b.path_scores);
  for (std::size_t i = 1; i < a.path_scores.size(); ++i) EXPECT_GE(a.path_scores[i], a.path_scores[i - 1]);
  std::size_t expected_trace = 0;
  for (std::size_t step = 0; step <= a.selected.size() && step < fams.size(); ++step) expected_trace += fams.size() - step;
  EXPECT_EQ(a.trace.size(), expected_trace);
}

// -------------------------------------------------------------------- cli

nlohmann::json Config(const std::filesystem::path& csv) {
  return {{"schema_version", 1},
          {"dataset", {{"path", csv.string()}, {"time_column", "time"}}},
          {"split", {{"method", "time"}, {"train_fraction", 0.8}}},
          {"augmentation", {{"families", {"lag", "quant", "noise"}}}},
          {"sampling", {{"method", "smote"}}},
          {"model", {{"params", {{"n_rounds", 15}}}}},
          {"seed", 3}};
}

TEST(CliProperty, StageOrderRecordedAndReportRegenerates) {
  const auto dir = testing::TempDir("prop_regen");
  SaveCsv(VibrationDataset(0.05, 1500, 8), dir / "d.csv");
  const PipelineResult r = RunPipeline(ParseConfig(Config(dir / "d.csv"), dir), {dir / "a"});
  std::vector<std::string> expected;
  for (const char* s : kStageOrder) {
    if (std::string(s) != "select" && std::string(s) != "curve_shift") expected.push_back(s);
  }
  EXPECT_EQ(r.report_json["stages"].get<std::vector<std::string>>(), expected);
  // The embedded config alone reproduces the run.
  const nlohmann::json stored = nlohmann::json::parse(ReadFile(r.run_dir / "report.json"));
  const PipelineResult again = RunPipeline(ParseConfig(stored["config"], dir), {dir / "b"});
  EXPECT_EQ(StripVolatile(stored), StripVolatile(nlohmann::json::parse(ReadFile(again.run_dir / "report.json"))));
}

TEST(CliProperty, TestRowsDoNotReachTrainingState) {
  const auto dir = testing::TempDir("prop_leak");
  LabeledDataset ds = VibrationDataset(0.05, 1500, 8);
  SaveCsv(ds, dir / "a.csv");
  // Perturb only rows that the 0.8 time split sends to test.
  std::vector<std::vector<double>> values;
  for (const Column& c : ds.frame().columns()) {
    V v = c.values;
    for (std::size_t t = 1200; t < v.size(); ++t) v[t] = v[t] * 3 + 100;
    values.push_back(v);
  }
  SaveCsv(ds.WithFrame(ds.frame().WithValues(values)), dir / "b.csv");
  const auto ra = RunPipeline(ParseConfig(Config(dir / "a.csv"), dir), {dir, 1, false});
  const auto rb = RunPipeline(ParseConfig(Config(dir / "b.csv"), dir), {dir, 1, false});
  EXPECT_EQ(ra.report.fingerprint["train_state_hash"], rb.report.fingerprint["train_state_hash"]);
  EXPECT_EQ(ra.report.fingerprint["model_hash"], rb.report.fingerprint["model_hash"]);
  EXPECT_NE(ra.report.fingerprint["inputs"], rb.report.fingerprint["inputs"]);
}

TEST(CliProperty, GridColumnsMatchVariants) {
  const auto dir = testing::TempDir("prop_grid");
  SaveCsv(VibrationDataset(0.05, 800, 2), dir / "d.csv");
  nlohmann::json base = Config(dir / "d.csv");
  base.erase("augmentation");
  base.erase("sampling");
  const nlohmann::json samp = {{{"label", "none"}},
                               {{"label", "smote"}, {"override", {{"sampling", {{"method", "smote"}}}}}},
                               {{"label", "enn"}, {"override", {{"sampling", {{"method", "enn"}}}}}}};
  const nlohmann::json aug = {{{"label", "raw"}},
                              {{"label", "aug"}, {"override", {{"augmentation", {{"families", {"cnv"}}}}}}}};
  const ExperimentGrid g = ParseGrid({{"schema_version", 1}, {"base", base},
                                      {"axes", {{{"variants", aug}}, {{"variants", samp}}}}}, dir);
  const GridRunResult r = RunExperimentGrid(g, {});
  std::set<std::string> labels(r.table.labels.begin(), r.table.labels.end());
  EXPECT_EQ(labels.size(), g.variants.size());
  EXPECT_EQ(r.table.labels.size(), 6u);
  for (const auto& row : r.table.rows) EXPECT_EQ(row.values.size(), 6u);
}

}  // namespace
}  // namespace enrich
