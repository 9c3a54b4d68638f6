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

#include <benchmark/benchmark.h>

#include "enrich/augmentation.h"
#include "enrich/gbdt.h"
#include "enrich/imputation.h"
#include "enrich/random.h"
#include "enrich/sampling.h"
#include "enrich/synthetic.h"

namespace {

enrich::FeatureMatrix Matrix(std::size_t n, std::size_t d, std::size_t positives) {
  enrich::Rng rng(7);
  std::vector<double> values(n * d);
  std::vector<std::uint8_t> y(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i < positives;
    for (std::size_t j = 0; j < d; ++j) values[i * d + j] = rng.Normal() + (y[i] ? 1.0 : 0.0);
  }
  return enrich::FeatureMatrix(d, std::move(values), std::move(y));
}

void BM_TrainGbdt(benchmark::State& state) {
  const auto x = Matrix(static_cast<std::size_t>(state.range(0)), 30, state.range(0) / 20);
  enrich::GbdtParams p;
  p.n_rounds = 20;
  for (auto _ : state) benchmark::DoNotOptimize(enrich::TrainGbdt(x, p));
  state.SetItemsProcessed(state.iterations() * state.range(0) * p.n_rounds);
}
BENCHMARK(BM_TrainGbdt)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PredictProba(benchmark::State& state) {
  const auto x = Matrix(10000, 30, 500);
  enrich::GbdtParams p;
  p.n_rounds = 100;
  p.max_depth = 5;
  const auto model = enrich::TrainGbdt(x, p);
  for (auto _ : state) benchmark::DoNotOptimize(model.PredictProba(x));
  state.SetItemsProcessed(state.iterations() * x.rows());
}
BENCHMARK(BM_PredictProba)->Unit(benchmark::kMillisecond);

void BM_Smote(benchmark::State& state) {
  const auto x = Matrix(static_cast<std::size_t>(state.range(0)), 10, state.range(0) / 20);
  for (auto _ : state) benchmark::DoNotOptimize(enrich::Smote(x, 1.0, 5, 1));
}
BENCHMARK(BM_Smote)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_TomekLinks(benchmark::State& state) {
  const auto x = Matrix(static_cast<std::size_t>(state.range(0)), 10, state.range(0) / 5);
  for (auto _ : state) benchmark::DoNotOptimize(enrich::TomekLinks(x));
}
BENCHMARK(BM_TomekLinks)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_AugmentAll(benchmark::State& state) {
  const auto ds = enrich::VibrationDataset(0.05, static_cast<std::size_t>(state.range(0)), 3);
  enrich::AugmentationSpec spec;
  for (enrich::Family f : enrich::kAllFamilies) {
    enrich::FamilySpec fs{f, {}};
    fs.params.period = 12;
    spec.families.push_back(fs);
  }
  for (auto _ : state) benchmark::DoNotOptimize(enrich::AugmentFrame(ds, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AugmentAll)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_ImputeRolling(benchmark::State& state) {
  const auto ds = enrich::VibrationDataset(0.05, 20000, 3);
  const auto frame = enrich::InjectNulls(ds.frame(), 0.2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(enrich::ImputeRollingMean(frame, 5));
}
BENCHMARK(BM_ImputeRolling)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
