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

#include "vplat/kv.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "vplat/error.hpp"

namespace vplat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool is_name_char(char c, bool allow_dot) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         (allow_dot && c == '.');
}

[[noreturn]] void syntax(int line, const std::string& message) {
  throw Error(Errc::kSyntaxError, "line " + std::to_string(line) + ": " + message);
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Parses a quoted value starting at s[0] == '"'. Returns the unescaped text
// and the remainder after the closing quote.
std::pair<std::string, std::string_view> unquote(std::string_view s, int line) {
  std::string out;
  std::size_t i = 1;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') break;
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i >= s.size()) syntax(line, "dangling escape");
    switch (s[i]) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '0': out.push_back('\0'); break;
      case '\\': out.push_back('\\'); break;
      case '"': out.push_back('"'); break;
      case 'x': {
        if (i + 2 >= s.size()) syntax(line, "short \\x escape");
        const int hi = hex_digit(s[i + 1]);
        const int lo = hex_digit(s[i + 2]);
        if (hi < 0 || lo < 0) syntax(line, "bad \\x escape");
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        break;
      }
      default:
        syntax(line, std::string("unknown escape \\") + s[i]);
    }
  }
  if (i >= s.size()) syntax(line, "unterminated string");
  return {out, s.substr(i + 1)};
}

std::string_view strip_comment(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]))))
      return s.substr(0, i);
  }
  return s;
}

}  // namespace

KvDocument parse_kv(std::string_view text) {
  KvDocument doc;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      line = trim(strip_comment(line));
      if (line.back() != ']') syntax(line_no, "section header missing ']'");
      std::string_view name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) syntax(line_no, "empty section name");
      for (char c : name)
        if (!is_name_char(c, true))
          syntax(line_no, "invalid character in section name '" + std::string(name) + "'");
      doc.sections.push_back({std::string(name), line_no, {}});
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) syntax(line_no, "expected 'key = value'");
    if (doc.sections.empty()) syntax(line_no, "key outside of any section");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) syntax(line_no, "empty key");
    for (char c : key)
      if (!is_name_char(c, false))
        syntax(line_no, "invalid character in key '" + std::string(key) + "'");

    std::string_view rest = trim(line.substr(eq + 1));
    KvEntry entry;
    entry.key = std::string(key);
    entry.line = line_no;
    if (!rest.empty() && rest.front() == '"') {
      auto [value, tail] = unquote(rest, line_no);
      tail = trim(tail);
      if (!tail.empty() && tail.front() != '#')
        syntax(line_no, "unexpected text after quoted value");
      entry.value = std::move(value);
      entry.quoted = true;
    } else {
      entry.value = std::string(trim(strip_comment(rest)));
    }
    doc.sections.back().entries.push_back(std::move(entry));
  }
  return doc;
}

std::string kv_quote(std::string_view text) {
  std::string out = "\"";
  for (unsigned char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20 || c >= 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out += '"';
  return out;
}

std::string kv_hex(std::uint64_t value, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%0*llx", digits,
                static_cast<unsigned long long>(value));
  return buf;
}

std::string kv_where(const KvEntry& entry, std::string_view message) {
  return "line " + std::to_string(entry.line) + ": key '" + entry.key + "': " +
         std::string(message);
}

std::uint64_t kv_u64(const KvEntry& entry) {
  std::string_view s = entry.value;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  std::string digits;
  for (char c : s)
    if (c != '_') digits.push_back(c);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
  if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size())
    throw Error(Errc::kInvalidValue, kv_where(entry, "expected an unsigned integer"));
  return v;
}

std::uint32_t kv_u32(const KvEntry& entry) {
  const std::uint64_t v = kv_u64(entry);
  if (v > 0xFFFFFFFFull)
    throw Error(Errc::kInvalidValue, kv_where(entry, "value exceeds 32 bits"));
  return static_cast<std::uint32_t>(v);
}

bool kv_bool(const KvEntry& entry) {
  if (entry.value == "true" || entry.value == "1") return true;
  if (entry.value == "false" || entry.value == "0") return false;
  throw Error(Errc::kInvalidValue, kv_where(entry, "expected true or false"));
}

}  // namespace vplat
