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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "enrich/csv.h"
#include "enrich/error.h"
#include "enrich/pipeline.h"
#include "enrich/pipeline_config.h"
#include "enrich/report.h"
#include "enrich/synthetic.h"
#include "test_util.h"

namespace enrich {
namespace {

using nlohmann::json;

std::filesystem::path WriteToyCsv(const std::filesystem::path& dir, double nulls = 0.0) {
  LabeledDataset ds = VibrationDataset(0.05, 1200, 3);
  if (nulls > 0) ds = ds.WithFrame(InjectNulls(ds.frame(), nulls, 4));
  const auto path = dir / "toy.csv";
  SaveCsv(ds, path);
  return path;
}

json BaseConfig(const std::filesystem::path& csv) {
  return {{"schema_version", 1},
          {"dataset", {{"path", csv.string()}, {"time_column", "time"}}},
          {"split", {{"method", "time"}, {"train_fraction", 0.8}}},
          {"model", {{"params", {{"n_rounds", 20}, {"max_depth", 3}}}}},
          {"seed", 11}};
}

std::vector<std::string> Violations(const json& doc, const std::filesystem::path& dir) {
  try {
    ParseConfig(doc, dir);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool Mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(ConfigTest, MinimalParses) {
  const auto dir = testing::TempDir("cfg_min");
  const auto csv = WriteToyCsv(dir);
  const PipelineConfig c = ParseConfig({{"schema_version", 1}, {"dataset", {{"path", "toy.csv"}}}}, dir);
  EXPECT_EQ(c.dataset_path, dir / "toy.csv");
  EXPECT_EQ(c.task.mode, TaskMode::kDetect);
  EXPECT_EQ(c.sampling.method, SamplingMethod::kNone);
}

TEST(ConfigTest, PredictZeroShiftRejected) {
  const auto dir = testing::TempDir("cfg_shift");
  json doc = BaseConfig(WriteToyCsv(dir));
  doc["task"] = {{"mode", "predict"}, {"shift", 0}};
  EXPECT_TRUE(Mentions(Violations(doc, dir), "task.shift"));
}

TEST(ConfigTest, UnknownSamplingNameHasKeyPath) {
  const auto dir = testing::TempDir("cfg_samp");
  json doc = BaseConfig(WriteToyCsv(dir));
  doc["sampling"] = {{"method", "nearmiss"}};
  EXPECT_TRUE(Mentions(Violations(doc, dir), "sampling.method"));
}

TEST(ConfigTest, CollectsEveryViolation) {
  const auto dir = testing::TempDir("cfg_all");
  json doc = {{"schema_version", 1},
              {"dataset", {{"path", "missing.csv"}}},
              {"imputation", {{"method", "rolling"}, {"window", 1}}},
              {"sampling", {{"method", "smote"}, {"k", 0}}},
              {"bogus", true}};
  const auto v = Violations(doc, dir);
  EXPECT_TRUE(Mentions(v, "dataset.path"));
  EXPECT_TRUE(Mentions(v, "imputation.window"));
  EXPECT_TRUE(Mentions(v, "sampling.k"));
  EXPECT_TRUE(Mentions(v, "bogus"));
  EXPECT_GE(v.size(), 4u);
}

TEST(ConfigTest, NormalizedFormRoundTrips) {
  const auto dir = testing::TempDir("cfg_rt");
  json doc = BaseConfig(WriteToyCsv(dir));
  doc["augmentation"] = {{"families", {"lag", "cnv", {{"name", "trend"}, {"period", 12}}}}};
  doc["sampling"] = {{"method", "smote_enn"}};
  const PipelineConfig c = ParseConfig(doc, dir);
  EXPECT_EQ(ToJson(ParseConfig(ToJson(c), dir)), ToJson(c));
}

TEST(PipelineTest, DeterministicReports) {
  const auto dir = testing::TempDir("pipe_det");
  json doc = BaseConfig(WriteToyCsv(dir));
  doc["augmentation"] = {{"families", {"lag", "cnv", "noise"}}};
  doc["sampling"] = {{"method", "smote_tomek"}};
  const PipelineConfig c = ParseConfig(doc, dir);
  const PipelineResult a = RunPipeline(c, {dir / "a"});
  const PipelineResult b = RunPipeline(c, {dir / "b"});
  EXPECT_EQ(StripVolatile(json::parse(ReadFile(a.run_dir / "report.json"))),
            StripVolatile(json::parse(ReadFile(b.run_dir / "report.json"))));
  EXPECT_EQ(ReadFile(a.run_dir / "model.json"), ReadFile(b.run_dir / "model.json"));
  EXPECT_TRUE(std::filesystem::exists(a.run_dir / "table.csv"));
  const json stages = a.report_json["stages"];
  ASSERT_TRUE(stages.is_array());
  EXPECT_EQ(stages.front(), "load");
  EXPECT_EQ(stages.back(), "evaluate");
}

TEST(PipelineTest, TestDistributionUntouchedByResampling) {
  const auto dir = testing::TempDir("pipe_samp");
  json doc = BaseConfig(WriteToyCsv(dir));
  const PipelineResult plain = RunPipeline(ParseConfig(doc, dir), {dir, 1, false});
  doc["sampling"] = {{"method", "smote"}};
  const PipelineResult smote = RunPipeline(ParseConfig(doc, dir), {dir, 1, false});
  EXPECT_EQ(plain.report.confusion.total(), smote.report.confusion.total());
  EXPECT_EQ(plain.report.positive.support, smote.report.positive.support);
  EXPECT_GT(smote.report_json["sampling"]["synthetic"].get<int>(), 0);
}

TEST(PipelineTest, StageErrorNamesStage) {
  const auto dir = testing::TempDir("pipe_err");
  json doc = BaseConfig(WriteToyCsv(dir, 0.05));
  doc["augmentation"] = {{"families", {"lag"}}};
  try {
    RunPipeline(ParseConfig(doc, dir), {dir, 1, false});
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "augment");
  }
}

TEST(PipelineTest, AugmentedImportanceNames) {
  const auto dir = testing::TempDir("pipe_imp");
  json doc = BaseConfig(WriteToyCsv(dir));
  doc["augmentation"] = {{"families", {"cnv"}}};
  const PipelineResult r = RunPipeline(ParseConfig(doc, dir), {dir, 1, false});
  ASSERT_EQ(r.importance.size(), 4u);
  bool saw_cnv = false;
  for (const auto& f : r.importance) saw_cnv |= f.feature == "cnv_x1" || f.feature == "cnv_x2";
  EXPECT_TRUE(saw_cnv);
}

json TwoByTwoGrid(const std::filesystem::path& csv) {
  return {{"schema_version", 1},
          {"base", BaseConfig(csv)},
          {"report_dir", "grid"},
          {"axes",
           {{{"name", "aug"},
             {"variants",
              {{{"label", "none"}},
               {{"label", "aug"}, {"override", {{"augmentation", {{"families", {"cnv"}}}}}}}}}},
            {{"name", "samp"},
             {"variants",
              {{{"label", "none"}},
               {{"label", "tomek"}, {"override", {{"sampling", {{"method", "tomek"}}}}}}}}}}}};
}

TEST(ExperimentGridTest, RunsCrossProductAndResumes) {
  const auto dir = testing::TempDir("grid");
  const ExperimentGrid grid = ParseGrid(TwoByTwoGrid(WriteToyCsv(dir)), dir);
  ASSERT_EQ(grid.variants.size(), 4u);
  EXPECT_EQ(grid.variants[1].label, "none+tomek");
  GridRunResult first = RunExperimentGrid(grid, {});
  EXPECT_EQ(first.executed.size(), 4u);
  EXPECT_EQ(first.table.labels.size(), 4u);
  EXPECT_TRUE(std::filesystem::exists(first.out_dir / "table.csv"));
  std::filesystem::remove(first.out_dir / "aug+none" / "report.json");
  GridRunResult again = RunExperimentGrid(grid, {});
  EXPECT_EQ(again.executed, std::vector<std::string>{"aug+none"});
  EXPECT_EQ(again.skipped.size(), 3u);
  EXPECT_EQ(again.table.ToCsv(), first.table.ToCsv());
}

TEST(ExperimentGridTest, SingleVariantMatchesRun) {
  const auto dir = testing::TempDir("grid_one");
  const auto csv = WriteToyCsv(dir);
  json doc = {{"schema_version", 1},
              {"base", BaseConfig(csv)},
              {"axes", {{{"variants", {{{"label", "only"}}}}}}}};
  const GridRunResult g = RunExperimentGrid(ParseGrid(doc, dir), {});
  const PipelineResult r = RunPipeline(ParseConfig(BaseConfig(csv), dir), {dir, 1, false});
  ASSERT_EQ(g.table.labels.size(), 1u);
  const EvaluationReport stored =
      ReportFromJson(json::parse(ReadFile(g.out_dir / "only" / "report.json")));
  EXPECT_EQ(stored.confusion.tp, r.report.confusion.tp);
  EXPECT_EQ(stored.confusion.fp, r.report.confusion.fp);
  EXPECT_EQ(stored.macro.f1, r.report.macro.f1);
}

TEST(ExperimentGridTest, DuplicateLabelsRejected) {
  const auto dir = testing::TempDir("grid_dup");
  json doc = {{"schema_version", 1},
              {"base", BaseConfig(WriteToyCsv(dir))},
              {"axes", {{{"variants", {{{"label", "a"}}, {{"label", "a"}}}}}}}};
  EXPECT_THROW(ParseGrid(doc, dir), ConfigError);
}

int RunCli(const std::string& args, const std::filesystem::path& dir) {
  const std::string cmd = std::string(ENRICH_CLI_PATH) + " " + args + " > " +
                          (dir / "cli.log").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void WriteJson(const std::filesystem::path& path, const json& j) { std::ofstream(path) << j.dump(2); }

TEST(CliTest, ExitCodes) {
  const auto dir = testing::TempDir("cli");
  json doc = BaseConfig(WriteToyCsv(dir));
  WriteJson(dir / "good.json", doc);
  doc["sampling"] = {{"method", "nearmiss"}};
  WriteJson(dir / "bad.json", doc);
  std::ofstream(dir / "broken.json") << "{ not json";
  const std::string out = " --out " + (dir / "out").string();
  EXPECT_EQ(RunCli("run " + (dir / "good.json").string() + out, dir), 0);
  EXPECT_EQ(RunCli("run " + (dir / "bad.json").string() + out, dir), 2);
  EXPECT_EQ(RunCli("run " + (dir / "broken.json").string() + out, dir), 2);
  EXPECT_EQ(RunCli("frobnicate", dir), 2);
  json bad_runtime = BaseConfig(WriteToyCsv(dir, 0.05));
  bad_runtime["augmentation"] = {{"families", {"lag"}}};
  WriteJson(dir / "runtime.json", bad_runtime);
  EXPECT_EQ(RunCli("run " + (dir / "runtime.json").string() + out, dir), 1);
}

TEST(CliTest, ImportanceListsEveryFeature) {
  const auto dir = testing::TempDir("cli_imp");
  json doc = BaseConfig(WriteToyCsv(dir));
  doc["name"] = "imp";
  WriteJson(dir / "c.json", doc);
  ASSERT_EQ(RunCli("importance " + (dir / "c.json").string() + " --top 50 --out " +
                       (dir / "out").string(),
                   dir),
            0);
  std::istringstream csv(ReadFile(dir / "out" / "imp" / "importance.csv"));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 3u);  // header + x1, x2
}

}  // namespace
}  // namespace enrich
