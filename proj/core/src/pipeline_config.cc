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

#include "enrich/pipeline_config.h"

#include <fstream>
#include <set>

#include "enrich/error.h"

namespace enrich {
namespace {

using nlohmann::json;

// Typed access to a JSON object that records every problem instead of
// stopping at the first one.
class Section {
 public:
  Section(const json* obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (obj_ && !obj_->is_object()) {
      Error("", "must be an object");
      obj_ = nullptr;
    }
  }

  bool present() const { return obj_ != nullptr; }
  bool Has(const std::string& key) const { return obj_ && obj_->contains(key); }
  const json* Raw(const std::string& key) {
    seen_.insert(key);
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  Section Child(const std::string& key) { return Section(Raw(key), Path(key), errors_); }
  Section Nested(const json* obj, std::string path) { return Section(obj, std::move(path), errors_); }

  void Read(const std::string& key, double& out) {
    if (const json* v = Raw(key)) {
      if (v->is_number()) out = v->get<double>();
      else Error(key, "must be a number");
    }
  }
  void Read(const std::string& key, int& out) {
    if (const json* v = Raw(key)) {
      if (v->is_number_integer()) out = v->get<int>();
      else Error(key, "must be an integer");
    }
  }
  void Read(const std::string& key, std::uint64_t& out) {
    if (const json* v = Raw(key)) {
      if (v->is_number_unsigned()) out = v->get<std::uint64_t>();
      else if (v->is_number_integer() && v->get<std::int64_t>() >= 0) out = v->get<std::uint64_t>();
      else Error(key, "must be a non-negative integer");
    }
  }
  void Read(const std::string& key, bool& out) {
    if (const json* v = Raw(key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else Error(key, "must be a boolean");
    }
  }
  void Read(const std::string& key, std::string& out) {
    if (const json* v = Raw(key)) {
      if (v->is_string()) out = v->get<std::string>();
      else Error(key, "must be a string");
    }
  }

  // Flags keys never looked up.
  void CheckUnknown() {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!seen_.count(it.key())) Error(it.key(), "unknown key");
    }
  }

  void Error(const std::string& key, const std::string& what) {
    errors_.push_back(Path(key) + ": " + what);
  }

  std::string Path(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json* obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

void ReadFamilyParams(Section& s, FamilyParams& p) {
  s.Read("lag", p.lag);
  s.Read("window", p.window);
  s.Read("kernel", p.kernel);
  s.Read("pool", p.pool);
  s.Read("drift_max", p.drift_max);
  s.Read("drift_knots", p.drift_knots);
  s.Read("warp_ratio", p.warp_ratio);
  s.Read("warp_changes", p.warp_changes);
  s.Read("levels", p.levels);
  s.Read("noise_scale", p.noise_scale);
  if (s.Has("period")) {
    int period = 0;
    s.Read("period", period);
    p.period = period;
  }
}

json FamilyParamsJson(const FamilySpec& f) {
  const FamilyParams& p = f.params;
  json j{{"name", std::string(FamilyName(f.family))}};
  switch (f.family) {
    case Family::kLag: j["lag"] = p.lag; break;
    case Family::kRolling: j["window"] = p.window; break;
    case Family::kConvolve: j["kernel"] = p.kernel; break;
    case Family::kPool: j["pool"] = p.pool; break;
    case Family::kDrift: j["drift_max"] = p.drift_max; j["drift_knots"] = p.drift_knots; break;
    case Family::kTimeWarp: j["warp_ratio"] = p.warp_ratio; j["warp_changes"] = p.warp_changes; break;
    case Family::kQuantize: j["levels"] = p.levels; break;
    case Family::kNoise: j["noise_scale"] = p.noise_scale; break;
    case Family::kTrend:
    case Family::kSeasonal:
    case Family::kResidual:
      if (p.period) j["period"] = *p.period;
      break;
    default: break;
  }
  return j;
}

void ParseAugmentation(Section s, PipelineConfig& c) {
  if (!s.present()) return;
  std::optional<int> period;
  if (s.Has("period")) {
    int p = 0;
    s.Read("period", p);
    period = p;
  }
  if (s.Has("seed")) {
    s.Read("seed", c.augmentation.seed);
    c.augmentation_seed_set = true;
  }
  const json* fams = s.Raw("families");
  if (fams) {
    if (fams->is_string() && fams->get<std::string>() == "all") {
      for (Family f : kAllFamilies) c.augmentation.families.push_back({f, {}});
    } else if (fams->is_array()) {
      for (std::size_t i = 0; i < fams->size(); ++i) {
        const json& item = (*fams)[i];
        const std::string path = s.Path("families") + "[" + std::to_string(i) + "]";
        std::string name;
        FamilySpec spec;
        if (item.is_string()) {
          name = item.get<std::string>();
        } else if (item.is_object()) {
          Section fs = s.Nested(&item, path);
          fs.Read("name", name);
          ReadFamilyParams(fs, spec.params);
          fs.CheckUnknown();
        }
        if (!item.is_string() && !item.is_object()) {
          s.Error("families[" + std::to_string(i) + "]", "must be a family name or object");
          continue;
        }
        const auto fam = ParseFamily(name);
        if (!fam) {
          s.Error("families[" + std::to_string(i) + "]", "unknown augmentation family '" + name + "'");
          continue;
        }
        spec.family = *fam;
        c.augmentation.families.push_back(spec);
      }
    } else {
      s.Error("families", "must be \"all\" or a list of families");
    }
  }
  for (FamilySpec& f : c.augmentation.families) {
    if (!f.params.period && period) f.params.period = period;
  }
  s.CheckUnknown();
}

std::string_view ToString(TaskMode m) { return m == TaskMode::kDetect ? "detect" : "predict"; }

std::string_view ToString(ImputationMethod m) {
  switch (m) {
    case ImputationMethod::kNone: return "none";
    case ImputationMethod::kZero: return "zero";
    case ImputationMethod::kRolling: return "rolling";
  }
  return "none";
}

void ParseTask(Section s, PipelineConfig& c) {
  if (!s.present()) return;
  std::string mode = "detect";
  s.Read("mode", mode);
  if (mode == "detect") {
    c.task.mode = TaskMode::kDetect;
    if (s.Has("shift")) s.Error("shift", "only valid with mode \"predict\"");
    s.Raw("shift");
  } else if (mode == "predict") {
    c.task.mode = TaskMode::kPredict;
    if (!s.Has("shift")) s.Error("shift", "required for mode \"predict\"");
    s.Read("shift", c.task.shift);
    if (s.Has("shift") && c.task.shift < 1) s.Error("shift", "must be >= 1");
  } else {
    s.Error("mode", "must be \"detect\" or \"predict\", got '" + mode + "'");
  }
  s.CheckUnknown();
}

void ParseImputation(Section s, PipelineConfig& c) {
  if (!s.present()) return;
  std::string method = "none";
  s.Read("method", method);
  if (method == "none") c.imputation.method = ImputationMethod::kNone;
  else if (method == "zero") c.imputation.method = ImputationMethod::kZero;
  else if (method == "rolling") c.imputation.method = ImputationMethod::kRolling;
  else s.Error("method", "unknown imputation method '" + method + "'");
  s.Read("window", c.imputation.window);
  if (c.imputation.window < 2) s.Error("window", "must be >= 2");
  s.CheckUnknown();
}

void ParseSampling(Section s, PipelineConfig& c) {
  if (!s.present()) return;
  std::string method = "none";
  s.Read("method", method);
  if (auto m = ParseSamplingMethod(method)) c.sampling.method = *m;
  else s.Error("method", "unknown sampling method '" + method + "'");
  s.Read("target_ratio", c.sampling.target_ratio);
  s.Read("k", c.sampling.k);
  s.Read("k_enn", c.sampling.k_enn);
  s.Read("beta", c.sampling.beta);
  if (!(c.sampling.target_ratio > 0.0 && c.sampling.target_ratio <= 1.0)) {
    s.Error("target_ratio", "must lie in (0, 1]");
  }
  if (c.sampling.k < 1) s.Error("k", "must be >= 1");
  if (c.sampling.k_enn < 1) s.Error("k_enn", "must be >= 1");
  if (!(c.sampling.beta >= 0.0)) s.Error("beta", "must be >= 0");
  s.CheckUnknown();
}

void ParseSplit(Section s, PipelineConfig& c) {
  if (!s.present()) return;
  std::string method = "random";
  s.Read("method", method);
  if (method == "random") c.split.method = SplitMethod::kRandom;
  else if (method == "time") c.split.method = SplitMethod::kTime;
  else if (method == "run") c.split.method = SplitMethod::kRun;
  else s.Error("method", "unknown split method '" + method + "'");
  s.Read("test_fraction", c.split.test_fraction);
  s.Read("stratified", c.split.stratified);
  s.Read("train_fraction", c.split.train_fraction);
  s.Read("gap_minutes", c.split.gap_minutes);
  if (!(c.split.test_fraction > 0.0 && c.split.test_fraction < 1.0)) {
    s.Error("test_fraction", "must lie in (0, 1)");
  }
  if (!(c.split.train_fraction > 0.0 && c.split.train_fraction < 1.0)) {
    s.Error("train_fraction", "must lie in (0, 1)");
  }
  if (!(c.split.gap_minutes > 0.0)) s.Error("gap_minutes", "must be > 0");
  s.CheckUnknown();
}

void ParseParams(Section s, GbdtParams& p) {
  if (!s.present()) return;
  s.Read("n_rounds", p.n_rounds);
  s.Read("max_depth", p.max_depth);
  s.Read("learning_rate", p.learning_rate);
  s.Read("lambda", p.lambda);
  s.Read("alpha", p.alpha);
  s.Read("subsample", p.subsample);
  s.Read("scale_pos_weight", p.scale_pos_weight);
  s.Read("min_child_hessian", p.min_child_hessian);
  try {
    p.Validate();
  } catch (const InvalidArgument& e) {
    s.Error("", e.what());
  }
  s.CheckUnknown();
}

void ParseModel(Section s, PipelineConfig& c) {
  if (!s.present()) return;
  ParseParams(s.Child("params"), c.model.params);
  if (const json* g = s.Raw("grid")) {
    if (g->is_string() && g->get<std::string>() == "default") {
      c.model.default_grid = true;
    } else if (g->is_object()) {
      ParamGrid grid;
      for (auto it = g->begin(); it != g->end(); ++it) {
        const std::string key = "grid." + it.key();
        if (!it->is_array() || it->empty()) {
          s.Error(key, "must be a non-empty list of numbers");
          continue;
        }
        std::vector<double> values;
        for (const json& v : *it) {
          if (v.is_number()) values.push_back(v.get<double>());
          else s.Error(key, "must contain only numbers");
        }
        grid[it.key()] = values;
      }
      try {
        ExpandGrid(grid, c.model.params);
        c.model.grid = grid;
      } catch (const InvalidArgument& e) {
        s.Error("grid", e.what());
      }
    } else {
      s.Error("grid", "must be \"default\" or an object of value lists");
    }
  }
  Section cv = s.Child("cv");
  if (cv.present()) {
    cv.Read("k", c.model.cv.k);
    cv.Read("repeats", c.model.cv.repeats);
    std::string scoring(ToString(c.model.cv.scoring));
    cv.Read("scoring", scoring);
    if (auto sc = ParseScoring(scoring)) c.model.cv.scoring = *sc;
    else cv.Error("scoring", "unknown scoring '" + scoring + "'");
    if (c.model.cv.k < 2) cv.Error("k", "must be >= 2");
    if (c.model.cv.repeats < 1) cv.Error("repeats", "must be >= 1");
    cv.CheckUnknown();
  }
  s.CheckUnknown();
}

}  // namespace

std::string_view ToString(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::kNone: return "none";
    case SamplingMethod::kSmote: return "smote";
    case SamplingMethod::kTomek: return "tomek";
    case SamplingMethod::kEnn: return "enn";
    case SamplingMethod::kAdasyn: return "adasyn";
    case SamplingMethod::kSmoteTomek: return "smote_tomek";
    case SamplingMethod::kSmoteEnn: return "smote_enn";
  }
  return "none";
}

std::optional<SamplingMethod> ParseSamplingMethod(std::string_view name) {
  for (SamplingMethod m : {SamplingMethod::kNone, SamplingMethod::kSmote, SamplingMethod::kTomek,
                           SamplingMethod::kEnn, SamplingMethod::kAdasyn,
                           SamplingMethod::kSmoteTomek, SamplingMethod::kSmoteEnn}) {
    if (ToString(m) == name) return m;
  }
  return std::nullopt;
}

PipelineConfig ParseConfig(const json& doc, const std::filesystem::path& base_dir,
                           bool check_files) {
  std::vector<std::string> errors;
  PipelineConfig c;
  Section root(&doc, "", errors);
  if (!root.present()) throw ConfigError(errors);

  if (!root.Has("schema_version")) {
    root.Error("schema_version", "required");
  } else {
    root.Read("schema_version", c.schema_version);
    if (c.schema_version != kConfigSchemaVersion) {
      root.Error("schema_version", "unsupported version " + std::to_string(c.schema_version) +
                                       " (expected " + std::to_string(kConfigSchemaVersion) + ")");
    }
  }
  root.Read("name", c.name);
  root.Read("seed", c.seed);

  Section ds = root.Child("dataset");
  if (!ds.present()) {
    root.Error("dataset", "required");
  } else {
    std::string path;
    if (!ds.Has("path")) ds.Error("path", "required");
    ds.Read("path", path);
    ds.Read("y_column", c.schema.y_column);
    if (ds.Has("time_column")) {
      std::string time;
      ds.Read("time_column", time);
      c.schema.time_column = time;
    }
    if (!path.empty()) {
      std::filesystem::path p(path);
      c.dataset_path = p.is_absolute() ? p : base_dir / p;
      if (check_files && !std::filesystem::exists(c.dataset_path)) {
        ds.Error("path", "file not found: " + c.dataset_path.string());
      }
    }
    ds.CheckUnknown();
  }

  ParseTask(root.Child("task"), c);
  ParseImputation(root.Child("imputation"), c);
  ParseAugmentation(root.Child("augmentation"), c);
  if (!c.augmentation.families.empty()) {
    try {
      Validate(c.augmentation);
    } catch (const InvalidArgument& e) {
      errors.push_back(std::string("augmentation: ") + e.what());
    }
  }
  ParseSampling(root.Child("sampling"), c);
  ParseSplit(root.Child("split"), c);
  Section fs = root.Child("feature_selection");
  if (fs.present()) {
    int top = 0;
    if (!fs.Has("top")) fs.Error("top", "required");
    fs.Read("top", top);
    if (fs.Has("top") && top < 1) fs.Error("top", "must be >= 1");
    if (top >= 1) c.top_features = static_cast<std::size_t>(top);
    fs.CheckUnknown();
  }
  ParseModel(root.Child("model"), c);
  std::string report_dir = c.report_dir.string();
  root.Read("report_dir", report_dir);
  c.report_dir = std::filesystem::path(report_dir).is_absolute() ? std::filesystem::path(report_dir)
                                                                   : base_dir / report_dir;
  root.CheckUnknown();
  if (c.split.method == SplitMethod::kRun && !c.schema.time_column) {
    errors.push_back("split.method: \"run\" requires dataset.time_column");
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": invalid JSON: " + e.what()});
  }
}

PipelineConfig LoadConfig(const std::filesystem::path& path) {
  return ParseConfig(ReadJsonFile(path), path.parent_path());
}

json ToJson(const PipelineConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["dataset"] = {{"path", c.dataset_path.generic_string()}, {"y_column", c.schema.y_column}};
  if (c.schema.time_column) j["dataset"]["time_column"] = *c.schema.time_column;
  j["task"] = {{"mode", std::string(ToString(c.task.mode))}};
  if (c.task.mode == TaskMode::kPredict) j["task"]["shift"] = c.task.shift;
  j["imputation"] = {{"method", std::string(ToString(c.imputation.method))},
                     {"window", c.imputation.window}};
  json fams = json::array();
  for (const FamilySpec& f : c.augmentation.families) fams.push_back(FamilyParamsJson(f));
  j["augmentation"] = {{"families", fams}};
  if (c.augmentation_seed_set) j["augmentation"]["seed"] = c.augmentation.seed;
  j["sampling"] = {{"method", std::string(ToString(c.sampling.method))},
                   {"target_ratio", c.sampling.target_ratio},
                   {"k", c.sampling.k},
                   {"k_enn", c.sampling.k_enn},
                   {"beta", c.sampling.beta}};
  j["split"] = {{"method", std::string(ToString(c.split.method))},
                {"test_fraction", c.split.test_fraction},
                {"stratified", c.split.stratified},
                {"train_fraction", c.split.train_fraction},
                {"gap_minutes", c.split.gap_minutes}};
  if (c.top_features) j["feature_selection"] = {{"top", *c.top_features}};
  json params = c.model.params.ToJson();
  params.erase("seed");
  j["model"] = {{"params", params},
                {"cv",
                 {{"k", c.model.cv.k},
                  {"repeats", c.model.cv.repeats},
                  {"scoring", std::string(ToString(c.model.cv.scoring))}}}};
  if (c.model.default_grid) j["model"]["grid"] = "default";
  else if (c.model.grid) j["model"]["grid"] = *c.model.grid;
  j["report_dir"] = c.report_dir.generic_string();
  return j;
}

}  // namespace enrich
