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

#ifndef ENRICH_ERROR_H_
#define ENRICH_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace enrich {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CSV content, ragged rows, bad labels).
class DataError : public Error {
 public:
  using Error::Error;
};

// A precondition on an operation argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Configuration validation failure. Carries every violation found, each
// prefixed with the offending key path.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// A pipeline stage failed. The message names the stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what);

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace enrich

#endif  // ENRICH_ERROR_H_
