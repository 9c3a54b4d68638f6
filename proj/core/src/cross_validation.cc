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

#include "enrich/cross_validation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "enrich/error.h"
#include "enrich/metrics.h"
#include "enrich/random.h"

namespace enrich {
namespace {

void SetParam(GbdtParams& p, const std::string& name, double v) {
  if (name == "n_rounds") p.n_rounds = static_cast<int>(std::llround(v));
  else if (name == "max_depth") p.max_depth = static_cast<int>(std::llround(v));
  else if (name == "learning_rate") p.learning_rate = v;
  else if (name == "lambda") p.lambda = v;
  else if (name == "alpha") p.alpha = v;
  else if (name == "subsample") p.subsample = v;
  else if (name == "scale_pos_weight") p.scale_pos_weight = v;
  else if (name == "min_child_hessian") p.min_child_hessian = v;
  else throw InvalidArgument("unknown grid parameter '" + name + "'");
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. The first
// exception is rethrown after all threads finish.
template <typename Fn>
void ParallelFor(std::size_t count, int workers, Fn fn) {
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> FoldImportance(const FeatureMatrix& x, const Fold& fold,
                                   const GbdtParams& params) {
  const GbdtModel model = TrainGbdt(x.SelectRows(fold.train), params);
  std::vector<double> cover(x.cols(), 0.0);
  for (const auto& imp : TotalCoverImportance(model)) cover[imp.index] = imp.total_cover;
  return cover;
}

}  // namespace

std::string_view ToString(Scoring scoring) {
  switch (scoring) {
    case Scoring::kMacroF1:
      return "macro_f1";
    case Scoring::kRecallPos:
      return "recall_pos";
    case Scoring::kPrecisionPos:
      return "precision_pos";
  }
  return "unknown";
}

std::optional<Scoring> ParseScoring(std::string_view name) {
  for (Scoring s : {Scoring::kMacroF1, Scoring::kRecallPos, Scoring::kPrecisionPos}) {
    if (ToString(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<Fold> RepeatedStratifiedKFold(std::span<const std::uint8_t> y, const CvSpec& spec) {
  if (spec.k < 2) throw InvalidArgument("CV needs k >= 2");
  if (spec.repeats < 1) throw InvalidArgument("CV needs repeats >= 1");
  const auto k = static_cast<std::size_t>(spec.k);
  std::vector<std::size_t> pos_rows, neg_rows;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] ? pos_rows : neg_rows).push_back(i);
  if (pos_rows.size() < k) {
    throw InvalidArgument("stratified " + std::to_string(k) + "-fold CV needs at least " +
                          std::to_string(k) + " positives, got " + std::to_string(pos_rows.size()));
  }
  std::vector<Fold> folds;
  for (int r = 0; r < spec.repeats; ++r) {
    Rng rng(DeriveSeed(spec.seed, static_cast<std::uint64_t>(r)));
    std::vector<std::size_t> pos = pos_rows, neg = neg_rows;
    rng.Shuffle(std::span<std::size_t>(pos));
    rng.Shuffle(std::span<std::size_t>(neg));
    std::vector<int> assign(y.size());
    for (std::size_t i = 0; i < pos.size(); ++i) assign[pos[i]] = static_cast<int>(i % k);
    for (std::size_t i = 0; i < neg.size(); ++i) {
      assign[neg[i]] = static_cast<int>((i + pos.size()) % k);
    }
    for (std::size_t f = 0; f < k; ++f) {
      Fold fold;
      fold.repeat = r;
      fold.fold = static_cast<int>(f);
      for (std::size_t i = 0; i < y.size(); ++i) {
        (assign[i] == static_cast<int>(f) ? fold.validation : fold.train).push_back(i);
      }
      folds.push_back(std::move(fold));
    }
  }
  return folds;
}

double ScorePredictions(Scoring scoring, std::span<const std::uint8_t> y_true,
                        std::span<const std::uint8_t> y_pred) {
  const EvaluationReport r = ComputeMetrics(Confusion(y_true, y_pred));
  switch (scoring) {
    case Scoring::kMacroF1:
      return r.macro.f1;
    case Scoring::kRecallPos:
      return r.positive.recall;
    case Scoring::kPrecisionPos:
      return r.positive.precision;
  }
  return 0.0;
}

std::vector<GbdtParams> ExpandGrid(const ParamGrid& grid, const GbdtParams& base) {
  std::vector<GbdtParams> out{base};
  for (const auto& [name, values] : grid) {
    if (values.empty()) throw InvalidArgument("grid parameter '" + name + "' has no values");
    std::vector<GbdtParams> next;
    next.reserve(out.size() * values.size());
    for (const GbdtParams& p : out) {
      for (double v : values) {
        GbdtParams q = p;
        SetParam(q, name, v);
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  for (const GbdtParams& p : out) p.Validate();
  return out;
}

ParamGrid DefaultGrid(double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("class ratio must be > 0");
  std::vector<double> spw{1.0, std::sqrt(rho), rho / 2.0, rho, 2.0 * rho};
  std::sort(spw.begin(), spw.end());
  spw.erase(std::unique(spw.begin(), spw.end()), spw.end());
  return {{"scale_pos_weight", spw},
          {"n_rounds", {50, 100, 200}},
          {"max_depth", {3, 5}},
          {"learning_rate", {0.1, 0.3}},
          {"lambda", {1.0}},
          {"alpha", {0.0, 1.0}},
          {"subsample", {0.8, 1.0}}};
}

GridSearchResult GridSearch(const FeatureMatrix& x, const ParamGrid& grid, const CvSpec& cv,
                            const GbdtParams& base, const FoldResampler& resampler,
                            int workers) {
  GridSearchResult result;
  result.candidates = ExpandGrid(grid, base);
  const std::vector<Fold> folds = RepeatedStratifiedKFold(x.labels(), cv);

  // Resample each training fold once; every candidate sees the same rows.
  std::vector<FeatureMatrix> train(folds.size());
  std::vector<FeatureMatrix> valid(folds.size());
  ParallelFor(folds.size(), workers, [&](std::size_t f) {
    train[f] = x.SelectRows(folds[f].train);
    if (resampler) train[f] = resampler(train[f], DeriveSeed(cv.seed, 1000 + f));
    valid[f] = x.SelectRows(folds[f].validation);
  });

  const std::size_t nc = result.candidates.size();
  result.table.resize(nc * folds.size());
  ParallelFor(result.table.size(), workers, [&](std::size_t t) {
    const std::size_t c = t / folds.size();
    const std::size_t f = t % folds.size();
    const GbdtModel model = TrainGbdt(train[f], result.candidates[c]);
    const auto pred = PredictLabel(model.PredictProba(valid[f]));
    result.table[t] = {c, folds[f].repeat, folds[f].fold,
                       ScorePredictions(cv.scoring, valid[f].labels(), pred)};
  });

  result.mean_scores.assign(nc, 0.0);
  for (const CvScore& s : result.table) result.mean_scores[s.candidate] += s.score;
  for (double& m : result.mean_scores) m /= static_cast<double>(folds.size());

  std::size_t best = 0;
  for (std::size_t c = 1; c < nc; ++c) {
    const GbdtParams& a = result.candidates[c];
    const GbdtParams& b = result.candidates[best];
    const double sa = result.mean_scores[c];
    const double sb = result.mean_scores[best];
    if (sa > sb) {
      best = c;
    } else if (sa == sb) {
      if (a.scale_pos_weight < b.scale_pos_weight ||
          (a.scale_pos_weight == b.scale_pos_weight && a.n_rounds < b.n_rounds)) {
        best = c;
      }
    }
  }
  result.best_index = best;
  result.best = result.candidates[best];
  return result;
}

LabeledDataset SelectTopFeatures(const LabeledDataset& ds, std::size_t m, const GbdtParams& params,
                                 const CvSpec& cv) {
  if (m == 0) throw InvalidArgument("feature selection needs m >= 1");
  const std::size_t d = ds.frame().num_columns();
  if (m >= d) return ds;
  const FeatureMatrix x = FeatureMatrix::FromDataset(ds);
  const std::vector<Fold> folds = RepeatedStratifiedKFold(ds.y(), cv);
  std::vector<double> cover(d, 0.0);
  for (const Fold& fold : folds) {
    const auto fc = FoldImportance(x, fold, params);
    for (std::size_t j = 0; j < d; ++j) cover[j] += fc[j];
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cover[a] > cover[b]; });
  order.resize(m);
  std::sort(order.begin(), order.end());
  LabeledDataset out = ds.WithFrame(ds.frame().SelectColumns(order));
  std::string kept;
  for (std::size_t j : order) kept += (kept.empty() ? "" : ",") + ds.frame().column(j).name;
  out.SetMetadata("feature_selection.kept", kept);
  return out;
}

}  // namespace enrich
