/*
 * Copyright 2026 The vplat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vplat {

/// Sectioned key/value documents shared by the platform, scenario and fault
/// campaign files.
///
///   # comment
///   [section.name]
///   key = value        # trailing comment
///   key = "quoted \"text\"\n"
///
/// Keys may repeat inside a section; consumers decide whether that is legal.
struct KvEntry {
  std::string key;
  std::string value;  // unquoted and unescaped
  bool quoted = false;
  int line = 0;
};

struct KvSection {
  std::string name;
  int line = 0;
  std::vector<KvEntry> entries;
};

struct KvDocument {
  std::vector<KvSection> sections;
};

/// Throws Error(kSyntaxError) naming the offending line.
KvDocument parse_kv(std::string_view text);

/// Quote and escape a string so parse_kv reads it back verbatim.
std::string kv_quote(std::string_view text);

std::string kv_hex(std::uint64_t value, int digits = 8);

/// Integer in decimal or 0x-prefixed hexadecimal.
std::uint64_t kv_u64(const KvEntry& entry);
std::uint32_t kv_u32(const KvEntry& entry);
bool kv_bool(const KvEntry& entry);

/// "line N: key 'k': message".
std::string kv_where(const KvEntry& entry, std::string_view message);

}  // namespace vplat
