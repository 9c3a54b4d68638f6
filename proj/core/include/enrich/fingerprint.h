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

#ifndef ENRICH_FINGERPRINT_H_
#define ENRICH_FINGERPRINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace enrich {

std::uint64_t Fnv1a64(std::string_view data);
std::string Hex64(std::uint64_t value);

// Git object id of `contents` stored as a blob: sha1("blob <len>\0" + data).
std::string GitBlobSha1(std::string_view contents);
std::string GitBlobSha1File(const std::filesystem::path& path);

}  // namespace enrich

#endif  // ENRICH_FINGERPRINT_H_
