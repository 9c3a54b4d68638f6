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

#include "enrich/csv.h"

#include <cctype>
#include <cmath>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "enrich/error.h"

namespace enrich {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool ParseDouble(std::string_view s, double* out) {
  s = Trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

// Reads an unsigned integer field of 1..max_digits digits at s[pos].
bool ReadInt(std::string_view s, std::size_t& pos, int max_digits, int* out) {
  int value = 0;
  int digits = 0;
  while (pos < s.size() && digits < max_digits &&
         std::isdigit(static_cast<unsigned char>(s[pos]))) {
    value = value * 10 + (s[pos] - '0');
    ++pos;
    ++digits;
  }
  *out = value;
  return digits > 0;
}

bool Expect(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

std::int64_t ToEpoch(int year, int month, int day, int hour, int minute,
                     int second) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year},
                           std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) {
    throw DataError("invalid calendar date or time of day");
  }
  const auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + hour * 3600 + minute * 60 +
         second;
}

std::optional<std::int64_t> TryParseIso(std::string_view s) {
  std::size_t pos = 0;
  int y, mo, d, h = 0, mi = 0, sec = 0;
  if (!ReadInt(s, pos, 4, &y) || pos != 4 || !Expect(s, pos, '-') ||
      !ReadInt(s, pos, 2, &mo) || !Expect(s, pos, '-') || !ReadInt(s, pos, 2, &d)) {
    return std::nullopt;
  }
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
    ++pos;
    if (!ReadInt(s, pos, 2, &h) || !Expect(s, pos, ':') || !ReadInt(s, pos, 2, &mi)) {
      return std::nullopt;
    }
    if (Expect(s, pos, ':')) {
      if (!ReadInt(s, pos, 2, &sec)) return std::nullopt;
      // Fractional seconds are truncated.
      if (Expect(s, pos, '.')) {
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      }
    }
    Expect(s, pos, 'Z');
  }
  if (pos != s.size()) return std::nullopt;
  return ToEpoch(y, mo, d, h, mi, sec);
}

std::optional<std::int64_t> TryParseUsShort(std::string_view s) {
  std::size_t pos = 0;
  int mo, d, y, h = 0, mi = 0, sec = 0;
  if (!ReadInt(s, pos, 2, &mo) || !Expect(s, pos, '/') || !ReadInt(s, pos, 2, &d) ||
      !Expect(s, pos, '/')) {
    return std::nullopt;
  }
  const std::size_t year_start = pos;
  if (!ReadInt(s, pos, 4, &y)) return std::nullopt;
  if (pos - year_start == 2) y += (y < 70) ? 2000 : 1900;
  if (pos < s.size()) {
    if (s[pos] != ' ') return std::nullopt;
    ++pos;
    if (!ReadInt(s, pos, 2, &h) || !Expect(s, pos, ':') || !ReadInt(s, pos, 2, &mi)) {
      return std::nullopt;
    }
    if (Expect(s, pos, ':') && !ReadInt(s, pos, 2, &sec)) return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;
  return ToEpoch(y, mo, d, h, mi, sec);
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view ToString(TimestampFormat format) {
  switch (format) {
    case TimestampFormat::kEpochSeconds:
      return "epoch_seconds";
    case TimestampFormat::kIso8601:
      return "iso8601";
    case TimestampFormat::kUsShort:
      return "us_short";
  }
  return "unknown";
}

std::optional<TimestampFormat> DetectTimestampFormat(std::string_view text) {
  text = Trim(text);
  double v;
  if (ParseDouble(text, &v)) return TimestampFormat::kEpochSeconds;
  try {
    if (TryParseIso(text)) return TimestampFormat::kIso8601;
    if (TryParseUsShort(text)) return TimestampFormat::kUsShort;
  } catch (const DataError&) {
  }
  return std::nullopt;
}

std::int64_t ParseTimestamp(std::string_view text, TimestampFormat format) {
  text = Trim(text);
  std::optional<std::int64_t> out;
  switch (format) {
    case TimestampFormat::kEpochSeconds: {
      double v;
      if (ParseDouble(text, &v)) out = static_cast<std::int64_t>(std::floor(v));
      break;
    }
    case TimestampFormat::kIso8601:
      out = TryParseIso(text);
      break;
    case TimestampFormat::kUsShort:
      out = TryParseUsShort(text);
      break;
  }
  if (!out) {
    throw DataError("cannot parse timestamp '" + std::string(text) + "' as " +
                    std::string(ToString(format)));
  }
  return *out;
}

std::string FormatIso8601(std::int64_t seconds) {
  using namespace std::chrono;
  const std::int64_t day_count =
      (seconds >= 0 ? seconds : seconds - 86399) / 86400;
  const std::int64_t rem = seconds - day_count * 86400;
  const year_month_day ymd{sys_days{days{day_count}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
  return buf;
}

std::vector<std::string> SplitCsvRecord(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && current.empty() && !was_quoted) {
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

LabeledDataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return ReadCsv(in, schema);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LabeledDataset ReadCsv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Strip a UTF-8 byte order mark.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  std::vector<std::string> header = SplitCsvRecord(line);
  for (auto& h : header) h = std::string(Trim(h));

  std::optional<std::size_t> y_index;
  std::optional<std::size_t> time_index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == schema.y_column) y_index = i;
    if (schema.time_column && header[i] == *schema.time_column) time_index = i;
  }
  if (!y_index) throw DataError("missing y column '" + schema.y_column + "'");
  if (schema.time_column && !time_index) {
    throw DataError("missing time column '" + *schema.time_column + "'");
  }

  std::vector<std::size_t> predictor_fields;
  std::vector<Column> columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == *y_index || (time_index && i == *time_index)) continue;
    predictor_fields.push_back(i);
    columns.push_back({header[i], {}});
  }

  std::vector<std::uint8_t> y;
  std::optional<std::vector<std::int64_t>> timestamps;
  std::optional<TimestampFormat> time_format;
  if (time_index) timestamps.emplace();

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    ++row;
    std::vector<std::string> fields;
    try {
      fields = SplitCsvRecord(line);
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(row) + ": " + e.what());
    }
    if (fields.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    double label;
    if (!ParseDouble(fields[*y_index], &label) || (label != 0.0 && label != 1.0)) {
      throw DataError("row " + std::to_string(row) + ": non-binary y value '" +
                      fields[*y_index] + "'");
    }
    y.push_back(static_cast<std::uint8_t>(label));
    if (time_index) {
      const std::string& cell = fields[*time_index];
      if (!time_format) {
        time_format = DetectTimestampFormat(cell);
        if (!time_format) {
          throw DataError("row " + std::to_string(row) +
                          ": unrecognised timestamp '" + cell + "'");
        }
      }
      try {
        timestamps->push_back(ParseTimestamp(cell, *time_format));
      } catch (const DataError& e) {
        throw DataError("row " + std::to_string(row) + ": " + e.what());
      }
    }
    for (std::size_t c = 0; c < predictor_fields.size(); ++c) {
      const std::string& cell = fields[predictor_fields[c]];
      double v = kNull;
      if (!Trim(cell).empty() && !ParseDouble(cell, &v)) {
        throw DataError("row " + std::to_string(row) + ", column '" +
                        columns[c].name + "': not a number '" + cell + "'");
      }
      columns[c].values.push_back(v);
    }
  }

  if (timestamps) {
    for (std::size_t i = 1; i < timestamps->size(); ++i) {
      if ((*timestamps)[i] < (*timestamps)[i - 1]) {
        throw DataError("row " + std::to_string(i + 1) + ": timestamps decrease");
      }
    }
  }
  const std::size_t n = y.size();
  TimeSeriesFrame frame(std::move(columns), std::move(timestamps));
  LabeledDataset ds(std::move(frame), std::move(y));
  if (time_format) ds.SetMetadata("time_format", std::string(ToString(*time_format)));
  ds.SetMetadata("rows", std::to_string(n));
  return ds;
}

void WriteCsv(const LabeledDataset& ds, std::ostream& out,
              const std::string& y_column, const std::string& time_column) {
  const auto& frame = ds.frame();
  bool first = true;
  auto sep = [&]() {
    if (!first) out << ',';
    first = false;
  };
  if (frame.has_timestamps()) {
    sep();
    out << time_column;
  }
  for (const auto& c : frame.columns()) {
    sep();
    out << c.name;
  }
  sep();
  out << y_column << '\n';
  for (std::size_t r = 0; r < ds.length(); ++r) {
    first = true;
    if (frame.has_timestamps()) {
      sep();
      out << FormatIso8601((*frame.timestamps())[r]);
    }
    for (const auto& c : frame.columns()) {
      sep();
      if (!IsNull(c.values[r])) out << FormatDouble(c.values[r]);
    }
    sep();
    out << static_cast<int>(ds.y()[r]) << '\n';
  }
}

void SaveCsv(const LabeledDataset& ds, const std::filesystem::path& path,
             const std::string& y_column, const std::string& time_column) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  WriteCsv(ds, out, y_column, time_column);
}

}  // namespace enrich
