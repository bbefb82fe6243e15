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

#include "vplat/trace.hpp"

#include <cctype>
#include <cstdio>
#include <vector>

#include "vplat/error.hpp"

namespace vplat {

std::string format_trace_line(const StepOutcome& o) {
  const StepRecord& r = o.record;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%016llx %08x %08x ",
                static_cast<unsigned long long>(r.cycle), r.pc, r.raw);
  std::string line = buf;
  if (o.kind == StepKind::kTrap && o.trap) {
    std::snprintf(buf, sizeof buf, "trap:%s val=%08x",
                  std::string(trap_name(o.trap->cause)).c_str(), o.trap->value);
    line += buf;
    return line;
  }
  line += r.insn ? mnemonic(r.insn->op) : std::string_view("?");
  if (r.reg_write) {
    std::snprintf(buf, sizeof buf, " x%u=%08x", unsigned{r.reg_write->index},
                  r.reg_write->value);
    line += buf;
  }
  if (r.mem) {
    std::snprintf(buf, sizeof buf, " %c%u@%08x=%08x",
                  r.mem->kind == Access::kRead ? 'r' : 'w', unsigned{r.mem->width},
                  r.mem->address, r.mem->value);
    line += buf;
    if (r.mem->status == Status::kDeviceBusy) line += "!busy";
  }
  return line;
}

namespace {

struct Record {
  std::size_t line = 0;
  std::vector<std::string_view> fields;
  std::uint64_t cycle = 0;
};

bool is_hex(std::string_view s, std::size_t digits) {
  if (s.size() != digits) return false;
  for (char c : s)
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::vector<Record> parse(std::string_view text, const char* which) {
  std::vector<Record> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;

    Record r;
    r.line = line_no;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ') ++j;
      if (j > i) r.fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (r.fields.size() < 4 || !is_hex(r.fields[0], 16) || !is_hex(r.fields[1], 8) ||
        !is_hex(r.fields[2], 8))
      throw Error(Errc::kMalformedTrace,
                  std::string(which) + " line " + std::to_string(line_no));
    r.cycle = std::stoull(std::string(r.fields[0]), nullptr, 16);
    out.push_back(std::move(r));
  }
  return out;
}

std::string effect_field(std::string_view token) {
  if (token.empty()) return "effect";
  if (token[0] == 'x') return "reg";
  if (token[0] == 'r' || token[0] == 'w') return "mem";
  return "effect";
}

}  // namespace

TraceDiff diff_traces(std::string_view a_text, std::string_view b_text) {
  const auto a = parse(a_text, "first trace");
  const auto b = parse(b_text, "second trace");
  static constexpr const char* kFixed[] = {"cycle", "pc", "raw", "mnemonic"};

  TraceDiff d;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& ra = a[k];
    const auto& rb = b[k];
    const std::size_t width = std::max(ra.fields.size(), rb.fields.size());
    for (std::size_t f = 0; f < width; ++f) {
      const std::string_view fa = f < ra.fields.size() ? ra.fields[f] : "<none>";
      const std::string_view fb = f < rb.fields.size() ? rb.fields[f] : "<none>";
      if (fa == fb) continue;
      d.equal = false;
      d.line = ra.line;
      d.cycle = std::min(ra.cycle, rb.cycle);
      d.field = f < 4 ? kFixed[f] : effect_field(f < ra.fields.size() ? fa : fb);
      d.a = std::string(fa);
      d.b = std::string(fb);
      return d;
    }
  }
  if (a.size() != b.size()) {
    const auto& longer = a.size() > b.size() ? a : b;
    d.equal = false;
    d.line = longer[n].line;
    d.cycle = longer[n].cycle;
    d.field = "length";
    d.a = std::to_string(a.size());
    d.b = std::to_string(b.size());
  }
  return d;
}

}  // namespace vplat
