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

#include "enrich/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "enrich/augmentation.h"
#include "enrich/cross_validation.h"
#include "enrich/csv.h"
#include "enrich/dataset.h"
#include "enrich/error.h"
#include "enrich/feature_matrix.h"
#include "enrich/fingerprint.h"
#include "enrich/imputation.h"
#include "enrich/random.h"
#include "enrich/sampling.h"

namespace enrich {
namespace {

using nlohmann::json;

constexpr int kReportSchemaVersion = 1;

struct Part {
  std::string label;
  LabeledDataset train;
  LabeledDataset test;
};

template <typename Fn>
auto Stage(const char* name, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::string NowIso8601() {
  const auto now = std::chrono::system_clock::now();
  return FormatIso8601(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
}

std::string SanitizeLabel(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
                    c == '-' || c == '+' || c == '=';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

// Rows of every part stacked in order. Timestamps survive only when every
// part has them and the result stays non-decreasing.
LabeledDataset Concat(const std::vector<const LabeledDataset*>& parts) {
  if (parts.size() == 1) return *parts.front();
  const TimeSeriesFrame& first = parts.front()->frame();
  std::vector<Column> cols;
  for (const Column& c : first.columns()) cols.push_back({c.name, {}});
  std::vector<std::uint8_t> y;
  std::vector<std::size_t> ids;
  std::vector<std::int64_t> ts;
  bool keep_ts = true;
  for (const LabeledDataset* p : parts) {
    const TimeSeriesFrame& f = p->frame();
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto& v = f.column(j).values;
      cols[j].values.insert(cols[j].values.end(), v.begin(), v.end());
    }
    y.insert(y.end(), p->y().begin(), p->y().end());
    ids.insert(ids.end(), p->row_ids().begin(), p->row_ids().end());
    if (!f.has_timestamps()) {
      keep_ts = false;
    } else if (keep_ts) {
      const auto& t = *f.timestamps();
      if (!ts.empty() && !t.empty() && t.front() < ts.back()) keep_ts = false;
      ts.insert(ts.end(), t.begin(), t.end());
    }
  }
  std::optional<std::vector<std::int64_t>> stamps;
  if (keep_ts) stamps = std::move(ts);
  return LabeledDataset(TimeSeriesFrame(std::move(cols), std::move(stamps)), std::move(y),
                        std::move(ids));
}

LabeledDataset KeepColumns(const LabeledDataset& ds, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(ds.frame().IndexOf(n));
  return ds.WithFrame(ds.frame().SelectColumns(idx));
}

json ClassCounts(const LabeledDataset& ds) {
  return {{"rows", ds.length()}, {"positives", ds.positive_count()},
          {"negatives", ds.negative_count()}};
}

json StateJson(const AugmentationState& state) {
  json j = json::object();
  for (const auto& [name, s] : state) j[name] = {{"min", s.min}, {"max", s.max}, {"std", s.std}};
  return j;
}

ResampleResult Resample(const FeatureMatrix& x, const SamplingConfig& s, std::uint64_t seed) {
  switch (s.method) {
    case SamplingMethod::kNone: {
      ResampleResult r;
      r.matrix = x;
      for (std::size_t i = 0; i < x.rows(); ++i) r.provenance.push_back({RowOrigin::Kind::kOriginal, i, 0, 0.0});
      return r;
    }
    case SamplingMethod::kSmote: return Smote(x, s.target_ratio, s.k, seed);
    case SamplingMethod::kTomek: return TomekLinks(x);
    case SamplingMethod::kEnn: return EditedNearestNeighbours(x, s.k_enn);
    case SamplingMethod::kAdasyn: return Adasyn(x, s.beta, s.k, seed);
    case SamplingMethod::kSmoteTomek: return SmoteTomek(x, s.target_ratio, s.k, seed);
    case SamplingMethod::kSmoteEnn: return SmoteEnn(x, s.target_ratio, s.k, s.k_enn, seed);
  }
  throw InvalidArgument("unknown sampling method");
}

json ResampleJson(const ResampleResult& r, const SamplingConfig& s, std::size_t rows_before) {
  json j;
  j["method"] = std::string(ToString(s.method));
  j["target_ratio"] = s.target_ratio;
  j["k"] = s.k;
  j["k_enn"] = s.k_enn;
  j["beta"] = s.beta;
  j["rows_before"] = rows_before;
  j["rows_after"] = r.matrix.rows();
  j["synthetic"] = r.synthetic_count;
  j["removed"] = r.removed.size();
  std::map<std::string, std::size_t> by_reason;
  json removed = json::array();
  for (const Removal& rm : r.removed) {
    ++by_reason[std::string(ToString(rm.reason))];
    json origin = rm.origin.kind == RowOrigin::Kind::kOriginal
                      ? json{{"original", rm.origin.source}}
                      : json{{"synthetic", {rm.origin.source, rm.origin.neighbor, rm.origin.lambda}}};
    removed.push_back({{"reason", std::string(ToString(rm.reason))}, {"origin", origin}});
  }
  j["removed_by_reason"] = by_reason;
  j["removed_rows"] = removed;
  json synthetic = json::array();
  for (const RowOrigin& o : r.provenance) {
    if (o.kind == RowOrigin::Kind::kSynthetic) synthetic.push_back({o.source, o.neighbor, o.lambda});
  }
  j["synthetic_rows"] = synthetic;  // [source, neighbor, lambda]
  j["warnings"] = r.warnings;
  j["positives_after"] = r.matrix.CountLabel(1);
  j["negatives_after"] = r.matrix.CountLabel(0);
  return j;
}

json ImputationJson(const ImputationReport& r, std::size_t dropped) {
  json residual = json::array();
  for (const auto& c : r.residual_nulls) residual.push_back({{"column", c.column}, {"row", c.row}});
  return {{"method", r.method},       {"window", r.window},
          {"filled", r.filled},       {"total_filled", r.TotalFilled()},
          {"residual_nulls", residual}, {"zero_as_missing", r.zero_as_missing},
          {"fallback_fills", r.fallback_fills}, {"dropped_rows", dropped}};
}

json ImportanceJson(const std::vector<FeatureImportance>& imp) {
  json j = json::array();
  for (const auto& f : imp) {
    j.push_back({{"feature", f.feature}, {"total_cover", f.total_cover}, {"split_count", f.split_count}});
  }
  return j;
}

}  // namespace

std::uint64_t StageSeedFor(std::uint64_t global_seed, StageSeed stage) {
  return DeriveSeed(global_seed, static_cast<std::uint64_t>(stage));
}

std::string ConfigHash(const PipelineConfig& config) {
  json j = ToJson(config);
  j.erase("report_dir");
  return Hex64(Fnv1a64(j.dump()));
}

json StripVolatile(json report) {
  report.erase("created_at");
  return report;
}

PipelineResult RunPipeline(const PipelineConfig& config, const RunOptions& options,
                           const LabeledDataset* preloaded) {
  PipelineResult result;
  const std::string config_hash = ConfigHash(config);
  result.run_id = SanitizeLabel(config.name.empty() ? "run-" + config_hash.substr(0, 12) : config.name);
  result.run_dir = options.out_dir.value_or(config.report_dir) / result.run_id;

  json report;
  report["schema_version"] = kReportSchemaVersion;
  report["run_id"] = result.run_id;
  report["created_at"] = NowIso8601();
  report["config"] = ToJson(config);
  report["config"].erase("report_dir");
  json stages = json::array();

  json seeds = {{"global", config.seed}};
  for (auto [name, id] : {std::pair{"split", StageSeed::kSplit}, {"augment", StageSeed::kAugment},
                          {"sampling", StageSeed::kSampling}, {"model", StageSeed::kModel},
                          {"cv", StageSeed::kCv}, {"feature_selection", StageSeed::kFeatureSelection}}) {
    seeds[name] = StageSeedFor(config.seed, id);
  }
  json inputs = json::object();

  // load
  LabeledDataset ds = Stage("load", [&] {
    if (preloaded) return *preloaded;
    inputs[config.dataset_path.filename().string()] = GitBlobSha1File(config.dataset_path);
    return LoadCsv(config.dataset_path, config.schema);
  });
  if (preloaded) inputs["<in-memory>"] = "unhashed";
  stages.push_back("load");
  report["dataset"] = ClassCounts(ds);
  report["dataset"]["columns"] = ds.frame().ColumnNames();
  report["dataset"]["metadata"] = ds.metadata();

  // impute
  Stage("impute", [&] {
    if (config.imputation.method == ImputationMethod::kNone) {
      report["imputation"] = {{"method", "none"}, {"nulls", ds.frame().NullCount()}};
      return;
    }
    std::size_t dropped = 0;
    if (config.imputation.method == ImputationMethod::kZero) {
      auto [frame, rep] = ImputeZero(ds.frame());
      ds = ds.WithFrame(std::move(frame));
      report["imputation"] = ImputationJson(rep, 0);
    } else {
      auto [frame, rep] = ImputeRollingMean(ds.frame(), config.imputation.window);
      ds = ds.WithFrame(std::move(frame));
      if (!rep.residual_nulls.empty()) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 1; i < ds.length(); ++i) keep.push_back(i);
        ds = ds.SelectRows(keep);
        dropped = 1;
      }
      report["imputation"] = ImputationJson(rep, dropped);
    }
  });
  stages.push_back("impute");

  // curve_shift
  if (config.task.mode == TaskMode::kPredict) {
    ds = Stage("curve_shift", [&] { return CurveShift(ds, config.task.shift); });
    stages.push_back("curve_shift");
  }
  report["task"] = ClassCounts(ds);
  report["task"]["mode"] = config.task.mode == TaskMode::kPredict ? "predict" : "detect";

  // split
  std::vector<Part> parts = Stage("split", [&] {
    std::vector<Part> out;
    json meta = json::object();
    switch (config.split.method) {
      case SplitMethod::kRandom: {
        SplitResult s = SplitRandom(ds, config.split.test_fraction,
                                    StageSeedFor(config.seed, StageSeed::kSplit), config.split.stratified);
        meta = s.metadata;
        out.push_back({"all", std::move(s.train), std::move(s.test)});
        break;
      }
      case SplitMethod::kTime: {
        SplitResult s = SplitTimeBased(ds, config.split.train_fraction);
        meta = s.metadata;
        out.push_back({"all", std::move(s.train), std::move(s.test)});
        break;
      }
      case SplitMethod::kRun: {
        const auto gap = static_cast<std::int64_t>(std::llround(config.split.gap_minutes * 60.0));
        std::vector<LabeledDataset> sessions = SplitRunBased(ds, gap);
        json list = json::array();
        for (std::size_t i = 0; i < sessions.size(); ++i) {
          SplitResult s = SplitTimeBased(sessions[i], config.split.train_fraction);
          json m = sessions[i].metadata();
          m["rows"] = sessions[i].length();
          m["positives"] = sessions[i].positive_count();
          list.push_back(m);
          out.push_back({"session_" + std::to_string(i + 1), std::move(s.train), std::move(s.test)});
        }
        meta["sessions"] = list;
        break;
      }
    }
    json parts_json = json::array();
    for (const Part& p : out) {
      parts_json.push_back({{"label", p.label}, {"train", ClassCounts(p.train)}, {"test", ClassCounts(p.test)}});
    }
    report["split"] = {{"method", std::string(ToString(config.split.method))},
                       {"metadata", meta},
                       {"parts", parts_json}};
    return out;
  });
  stages.push_back("split");

  auto pooled = [&](bool train) {
    std::vector<const LabeledDataset*> ptrs;
    for (const Part& p : parts) ptrs.push_back(train ? &p.train : &p.test);
    return Concat(ptrs);
  };

  // select
  if (config.top_features) {
    Stage("select", [&] {
      CvSpec cv = config.model.cv;
      cv.seed = StageSeedFor(config.seed, StageSeed::kFeatureSelection);
      GbdtParams params = config.model.params;
      params.seed = StageSeedFor(config.seed, StageSeed::kFeatureSelection);
      const LabeledDataset selected = SelectTopFeatures(pooled(true), *config.top_features, params, cv);
      const std::vector<std::string> kept = selected.frame().ColumnNames();
      for (Part& p : parts) {
        p.train = KeepColumns(p.train, kept);
        p.test = KeepColumns(p.test, kept);
      }
      report["feature_selection"] = {{"top", *config.top_features}, {"kept", kept}};
    });
    stages.push_back("select");
  }

  // augment
  json fingerprint;
  Stage("augment", [&] {
    AugmentationSpec spec = config.augmentation;
    if (!config.augmentation_seed_set) spec.seed = StageSeedFor(config.seed, StageSeed::kAugment);
    const std::size_t before = parts.front().train.frame().num_columns();
    const AugmentationState state = FitAugmentationState(pooled(true).frame());
    const json state_json = StateJson(state);
    json zero_denominator = json::object();
    if (!spec.families.empty()) {
      for (Part& p : parts) {
        p.train = AugmentFrame(p.train, spec, &state);
        p.test = AugmentFrame(p.test, spec, &state);
        const auto& m = p.train.metadata();
        auto it = m.find("augmentation.relchg_zero_denominator");
        if (it != m.end() && !it->second.empty()) zero_denominator[p.label + ".train"] = it->second;
        const auto& mt = p.test.metadata();
        it = mt.find("augmentation.relchg_zero_denominator");
        if (it != mt.end() && !it->second.empty()) zero_denominator[p.label + ".test"] = it->second;
      }
    }
    json fams = ToJson(config)["augmentation"]["families"];
    report["augmentation"] = {{"families", fams},
                              {"seed", spec.seed},
                              {"columns_before", before},
                              {"columns_after", parts.front().train.frame().num_columns()},
                              {"train_state", state_json},
                              {"relchg_zero_denominator", zero_denominator}};
    fingerprint["train_state_hash"] = Hex64(Fnv1a64(state_json.dump()));
  });
  stages.push_back("augment");

  // resample
  const LabeledDataset train_all = pooled(true);
  const FeatureMatrix x_train = Stage("resample", [&] { return FeatureMatrix::FromDataset(train_all); });
  ResampleResult resampled = Stage("resample", [&] {
    return Resample(x_train, config.sampling, StageSeedFor(config.seed, StageSeed::kSampling));
  });
  report["sampling"] = ResampleJson(resampled, config.sampling, x_train.rows());
  stages.push_back("resample");

  // train
  Stage("train", [&] {
    GbdtParams params = config.model.params;
    params.seed = StageSeedFor(config.seed, StageSeed::kModel);
    json model_json;
    if (config.model.grid || config.model.default_grid) {
      CvSpec cv = config.model.cv;
      cv.seed = StageSeedFor(config.seed, StageSeed::kCv);
      ParamGrid grid;
      if (config.model.default_grid) {
        const double pos = static_cast<double>(x_train.CountLabel(1));
        if (pos == 0) throw InvalidArgument("training split has no positives");
        grid = DefaultGrid(static_cast<double>(x_train.CountLabel(0)) / pos);
      } else {
        grid = *config.model.grid;
      }
      FoldResampler hook;
      if (config.sampling.method != SamplingMethod::kNone) {
        const SamplingConfig sc = config.sampling;
        hook = [sc](const FeatureMatrix& m, std::uint64_t seed) { return Resample(m, sc, seed).matrix; };
      }
      const GridSearchResult gs = GridSearch(x_train, grid, cv, params, hook, options.workers);
      params = gs.best;
      json table = json::array();
      for (const CvScore& s : gs.table) {
        table.push_back({s.candidate, s.repeat, s.fold, s.score});
      }
      json candidates = json::array();
      for (std::size_t c = 0; c < gs.candidates.size(); ++c) {
        json cj = gs.candidates[c].ToJson();
        cj.erase("seed");
        candidates.push_back({{"params", cj}, {"mean_score", gs.mean_scores[c]}});
      }
      model_json["grid_search"] = {{"grid", grid},
                                   {"scoring", std::string(ToString(cv.scoring))},
                                   {"k", cv.k},
                                   {"repeats", cv.repeats},
                                   {"best_index", gs.best_index},
                                   {"candidates", candidates},
                                   {"score_table", table}};  // [candidate, repeat, fold, score]
    }
    result.model = TrainGbdt(resampled.matrix, params);
    model_json["params"] = params.ToJson();
    model_json["trees"] = result.model.trees.size();
    model_json["base_score"] = result.model.base_score;
    report["model"] = model_json;
  });
  stages.push_back("train");

  // evaluate
  Stage("evaluate", [&] {
    ConfusionMatrix total;
    for (const Part& p : parts) {
      const FeatureMatrix x_test = FeatureMatrix::FromDataset(p.test);
      const auto pred = PredictLabel(result.model.PredictProba(x_test));
      const ConfusionMatrix cm = Confusion(x_test.labels(), pred);
      total.tp += cm.tp;
      total.fp += cm.fp;
      total.fn += cm.fn;
      total.tn += cm.tn;
      if (config.split.method == SplitMethod::kRun) {
        result.sessions.push_back({p.label, ComputeMetrics(cm), p.train.length(), p.test.length()});
      }
    }
    result.report = ComputeMetrics(total);
  });
  stages.push_back("evaluate");

  result.importance = TotalCoverImportance(result.model);
  const std::string model_text = result.model.Serialize();
  fingerprint["config_hash"] = config_hash;
  fingerprint["inputs"] = inputs;
  fingerprint["seeds"] = seeds;
  fingerprint["model_hash"] = Hex64(Fnv1a64(model_text));
  result.report.fingerprint = fingerprint;

  report["stages"] = stages;
  report["metrics"] = result.report.ToJson();
  if (!result.sessions.empty()) {
    json sessions = json::array();
    for (const SessionResult& s : result.sessions) {
      sessions.push_back({{"label", s.label}, {"train_rows", s.train_rows},
                          {"test_rows", s.test_rows}, {"metrics", s.report.ToJson()}});
    }
    report["sessions"] = sessions;
  }
  report["importance"] = ImportanceJson(result.importance);
  result.report_json = report;

  if (options.write_files) {
    std::vector<std::pair<std::string, EvaluationReport>> columns;
    for (const SessionResult& s : result.sessions) columns.push_back({s.label, s.report});
    columns.push_back({result.sessions.empty() ? result.run_id : "pooled", result.report});
    const ComparisonTable table = CompareReports(columns);
    WriteFileAtomic(result.run_dir / "model.json", model_text);
    WriteFileAtomic(result.run_dir / "table.csv", table.ToCsv());
    WriteFileAtomic(result.run_dir / "report.json", report.dump(2) + "\n");
  }
  return result;
}

EvaluationReport ReportFromJson(const json& report_json) {
  const json& m = report_json.at("metrics");
  const json& c = m.at("confusion");
  ConfusionMatrix cm{c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                     c.at("fn").get<std::size_t>(), c.at("tn").get<std::size_t>()};
  EvaluationReport r = ComputeMetrics(cm);
  r.fingerprint = m.value("fingerprint", json::object());
  return r;
}

ExperimentGrid ParseGrid(const json& doc, const std::filesystem::path& base_dir) {
  std::vector<std::string> errors;
  ExperimentGrid grid;
  grid.base_dir = base_dir;
  if (!doc.is_object()) throw ConfigError({"<root>: must be an object"});
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    static const std::set<std::string> known{"schema_version", "base", "axes", "report_dir"};
    if (!known.count(it.key())) errors.push_back(it.key() + ": unknown key");
  }
  if (doc.value("schema_version", 0) != kConfigSchemaVersion) {
    errors.push_back("schema_version: required and must equal " + std::to_string(kConfigSchemaVersion));
  }
  json base;
  std::filesystem::path config_dir = base_dir;
  if (!doc.contains("base")) {
    errors.push_back("base: required");
  } else if (doc["base"].is_string()) {
    const std::filesystem::path p = base_dir / doc["base"].get<std::string>();
    try {
      base = ReadJsonFile(p);
      config_dir = p.parent_path();
    } catch (const ConfigError& e) {
      for (const auto& v : e.violations()) errors.push_back("base: " + v);
    }
  } else if (doc["base"].is_object()) {
    base = doc["base"];
  } else {
    errors.push_back("base: must be a config object or a path");
  }
  grid.base_dir = config_dir;
  grid.report_dir = base_dir / doc.value("report_dir", std::string("grid_reports"));

  std::vector<std::vector<std::pair<std::string, json>>> axes;
  if (!doc.contains("axes") || !doc["axes"].is_array()) {
    errors.push_back("axes: required list");
  } else {
    for (std::size_t a = 0; a < doc["axes"].size(); ++a) {
      const json& axis = doc["axes"][a];
      const std::string path = "axes[" + std::to_string(a) + "]";
      if (!axis.is_object() || !axis.contains("variants") || !axis["variants"].is_array() ||
          axis["variants"].empty()) {
        errors.push_back(path + ": needs a non-empty \"variants\" list");
        continue;
      }
      grid.axes.push_back(axis.value("name", "axis" + std::to_string(a + 1)));
      std::vector<std::pair<std::string, json>> variants;
      std::set<std::string> labels;
      for (std::size_t v = 0; v < axis["variants"].size(); ++v) {
        const json& var = axis["variants"][v];
        const std::string vpath = path + ".variants[" + std::to_string(v) + "]";
        if (!var.is_object() || !var.contains("label") || !var["label"].is_string()) {
          errors.push_back(vpath + ": needs a string \"label\"");
          continue;
        }
        const std::string label = var["label"].get<std::string>();
        if (!labels.insert(label).second) errors.push_back(vpath + ".label: duplicate '" + label + "'");
        variants.push_back({label, var.value("override", json::object())});
      }
      axes.push_back(std::move(variants));
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));

  // Cross product, first axis slowest.
  std::vector<GridVariant> out{{"", base}};
  for (const auto& axis : axes) {
    std::vector<GridVariant> next;
    for (const GridVariant& g : out) {
      for (const auto& [label, patch] : axis) {
        GridVariant v{g.label.empty() ? label : g.label + "+" + label, g.config};
        v.config.merge_patch(patch);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  std::set<std::string> seen;
  for (GridVariant& v : out) {
    v.config["name"] = SanitizeLabel(v.label);
    if (!seen.insert(SanitizeLabel(v.label)).second) {
      errors.push_back("variant '" + v.label + "': label is not unique");
    }
    try {
      ParseConfig(v.config, grid.base_dir);
    } catch (const ConfigError& e) {
      for (const auto& msg : e.violations()) errors.push_back("variant '" + v.label + "': " + msg);
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  grid.variants = std::move(out);
  return grid;
}

ExperimentGrid LoadGrid(const std::filesystem::path& path) {
  return ParseGrid(ReadJsonFile(path), path.parent_path());
}

GridRunResult RunExperimentGrid(const ExperimentGrid& grid, const RunOptions& options,
                                std::ostream* log) {
  GridRunResult result;
  result.out_dir = options.out_dir.value_or(grid.report_dir);
  const std::size_t n = grid.variants.size();
  std::mutex mu;
  if (log) *log << "grid: " << n << " variants over " << grid.axes.size() << " axes\n";

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < n; ++i) {
    const auto report = result.out_dir / SanitizeLabel(grid.variants[i].label) / "report.json";
    if (std::filesystem::exists(report)) {
      result.skipped.push_back(grid.variants[i].label);
      if (log) *log << "skip " << grid.variants[i].label << " (reported)\n";
    } else {
      todo.push_back(i);
    }
  }

  RunOptions inner = options;
  inner.out_dir = result.out_dir;
  const int workers = std::max(1, options.workers);
  inner.workers = todo.size() > 1 ? 1 : workers;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t t = next++; t < todo.size(); t = next++) {
      const GridVariant& v = grid.variants[todo[t]];
      try {
        const PipelineConfig config = ParseConfig(v.config, grid.base_dir);
        const PipelineResult r = RunPipeline(config, inner);
        std::lock_guard<std::mutex> lock(mu);
        if (log) *log << "done " << v.label << " macro_f1=" << r.report.macro.f1 << "\n";
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(todo.size(), static_cast<std::size_t>(workers));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  for (std::size_t i : todo) result.executed.push_back(grid.variants[i].label);

  std::vector<std::pair<std::string, EvaluationReport>> columns;
  for (const GridVariant& v : grid.variants) {
    const auto path = result.out_dir / SanitizeLabel(v.label) / "report.json";
    columns.push_back({v.label, ReportFromJson(json::parse(ReadFile(path)))});
  }
  result.table = CompareReports(columns);
  WriteFileAtomic(result.out_dir / "table.csv", result.table.ToCsv());
  json table_json = result.table.ToJson();
  table_json["axes"] = grid.axes;
  WriteFileAtomic(result.out_dir / "table.json", table_json.dump(2) + "\n");
  return result;
}

}  // namespace enrich
