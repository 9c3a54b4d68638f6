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

#include "enrich/error.h"

#include <utility>

namespace enrich {
namespace {

std::string JoinViolations(const std::vector<std::string>& violations) {
  std::string out = "invalid configuration";
  for (const auto& v : violations) {
    out += "\n  ";
    out += v;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(JoinViolations(violations)), violations_(std::move(violations)) {}

StageError::StageError(std::string stage, const std::string& what)
    : Error("stage '" + stage + "': " + what), stage_(std::move(stage)) {}

}  // namespace enrich
