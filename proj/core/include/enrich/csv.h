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

#ifndef ENRICH_CSV_H_
#define ENRICH_CSV_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enrich/frame.h"

namespace enrich {

// Recognised timestamp encodings. The format is detected once per time
// column from its first non-empty cell and recorded in dataset metadata under
// "time_format".
enum class TimestampFormat {
  kEpochSeconds,  // 915148800 or 915148800.5
  kIso8601,       // 1999-05-01T00:00:00, 1999-05-01 00:00[:00][Z]
  kUsShort,       // 5/1/99 0:00 (M/D/YY H:MM[:SS]), two-digit years map to 19xx/20xx at 70
};

std::string_view ToString(TimestampFormat format);
std::optional<TimestampFormat> DetectTimestampFormat(std::string_view text);
// Seconds since the Unix epoch; throws DataError on malformed input.
std::int64_t ParseTimestamp(std::string_view text, TimestampFormat format);
std::string FormatIso8601(std::int64_t seconds);

// Splits one RFC-4180 record. Handles quoted fields with embedded commas and
// doubled quotes; does not support embedded newlines.
std::vector<std::string> SplitCsvRecord(std::string_view line);

struct CsvSchema {
  std::string y_column = "y";
  std::optional<std::string> time_column;
};

// Reads a header-first CSV. Predictor columns keep file order with the y and
// time columns removed; empty cells become null. Errors carry the 1-based
// data row number.
LabeledDataset LoadCsv(const std::filesystem::path& path, const CsvSchema& schema);
LabeledDataset ReadCsv(std::istream& in, const CsvSchema& schema);

// Writes time (ISO-8601, when present), predictors and y. Nulls are written
// as empty fields; values use round-trip precision.
void WriteCsv(const LabeledDataset& ds, std::ostream& out,
              const std::string& y_column = "y",
              const std::string& time_column = "time");
void SaveCsv(const LabeledDataset& ds, const std::filesystem::path& path,
             const std::string& y_column = "y",
             const std::string& time_column = "time");

}  // namespace enrich

#endif  // ENRICH_CSV_H_
