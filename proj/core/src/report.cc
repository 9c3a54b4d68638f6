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

#include "enrich/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "enrich/error.h"

namespace enrich {
namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string FormatMetric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

ComparisonTable CompareReports(
    const std::vector<std::pair<std::string, EvaluationReport>>& reports) {
  if (reports.empty()) throw InvalidArgument("comparison needs at least one report");
  ComparisonTable t;
  for (const auto& [label, r] : reports) {
    if (std::find(t.labels.begin(), t.labels.end(), label) != t.labels.end()) {
      throw InvalidArgument("duplicate comparison label '" + label + "'");
    }
    t.labels.push_back(label);
    t.support.push_back(std::to_string(r.confusion.total()) + " (" +
                        std::to_string(r.negative.support) + "+" +
                        std::to_string(r.positive.support) + ")");
  }
  struct View {
    const char* prefix;
    const ClassMetrics EvaluationReport::*member;
  };
  const View views[] = {{"class_0", &EvaluationReport::negative},
                        {"class_1", &EvaluationReport::positive},
                        {"macro", &EvaluationReport::macro},
                        {"weighted", &EvaluationReport::weighted}};
  for (const View& v : views) {
    for (const char* metric : {"precision", "recall", "f1"}) {
      ComparisonTable::Row row;
      row.metric = std::string(v.prefix) + "_" + metric;
      for (const auto& entry : reports) {
        const ClassMetrics& m = entry.second.*(v.member);
        const std::string name = metric;
        row.values.push_back(name == "precision" ? m.precision : name == "recall" ? m.recall : m.f1);
      }
      t.rows.push_back(std::move(row));
    }
  }
  ComparisonTable::Row acc;
  acc.metric = "accuracy";
  for (const auto& entry : reports) acc.values.push_back(entry.second.accuracy);
  t.rows.push_back(std::move(acc));
  for (auto& row : t.rows) {
    const double best = *std::max_element(row.values.begin(), row.values.end());
    for (double v : row.values) row.bold.push_back(v == best);
  }
  return t;
}

std::string ComparisonTable::ToCsv() const {
  std::ostringstream out;
  out << "metric";
  for (const auto& l : labels) out << ',' << CsvField(l);
  out << '\n';
  for (const auto& row : rows) {
    out << row.metric;
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      const std::string v = FormatMetric(row.values[i]);
      out << ',' << (row.bold[i] ? "**" + v + "**" : v);
    }
    out << '\n';
  }
  out << "support";
  for (const auto& s : support) out << ',' << CsvField(s);
  out << '\n';
  return out.str();
}

nlohmann::json ComparisonTable::ToJson() const {
  nlohmann::json j;
  j["labels"] = labels;
  j["support"] = support;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    j["rows"].push_back({{"metric", row.metric}, {"values", row.values}, {"bold", row.bold}});
  }
  return j;
}

void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  std::filesystem::path tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace enrich
