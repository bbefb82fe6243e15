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

#include "vplat/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "vplat/error.hpp"
#include "vplat/kv.hpp"
#include "vplat/simulator.hpp"

namespace vplat {

namespace {

double percent(std::uint64_t part, std::uint64_t whole) {
  if (whole == 0) return 0.0;
  return std::round(10000.0 * static_cast<double>(part) / static_cast<double>(whole)) / 100.0;
}

std::uint64_t mix_in(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

bool CoverageReport::in_code(std::uint32_t address) const {
  return std::any_of(code.begin(), code.end(), [&](const CodeRange& r) {
    return address >= r.base && std::uint64_t{address} < std::uint64_t{r.base} + r.size;
  });
}

void CoverageReport::record(const StepRecord& step) {
  if (!step.insn || !in_code(step.pc)) return;
  executed.insert(step.pc);
  if (step.branch_taken) {
    auto& b = branches[step.pc];
    (*step.branch_taken ? b.taken : b.not_taken) = true;
  }
}

std::uint64_t CoverageReport::total_instructions() const {
  std::uint64_t n = 0;
  for (const auto& r : code) n += r.size / 4;
  return n;
}

std::uint64_t CoverageReport::covered_outcomes() const {
  std::uint64_t n = 0;
  for (const auto& [addr, b] : branches) n += (b.taken ? 1 : 0) + (b.not_taken ? 1 : 0);
  return n;
}

double CoverageReport::instruction_percent() const {
  return percent(executed.size(), total_instructions());
}

double CoverageReport::branch_percent() const {
  return percent(covered_outcomes(), 2 * static_branches.size());
}

std::string CoverageReport::render() const {
  std::string out = "layout " + kv_hex(layout, 16) + "\n";
  for (const auto& r : code) out += "code " + kv_hex(r.base) + " " + kv_hex(r.size) + "\n";
  for (auto a : static_branches) out += "static-branch " + kv_hex(a) + "\n";
  for (auto a : executed) out += "insn " + kv_hex(a) + "\n";
  for (const auto& [a, b] : branches)
    out += "branch " + kv_hex(a) + " " + (b.taken ? "1" : "0") + " " +
           (b.not_taken ? "1" : "0") + "\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "# instructions %zu/%llu (%.2f%%) branch-outcomes %llu/%zu (%.2f%%)\n",
                executed.size(), static_cast<unsigned long long>(total_instructions()),
                instruction_percent(), static_cast<unsigned long long>(covered_outcomes()),
                2 * static_branches.size(), branch_percent());
  out += buf;
  return out;
}

CoverageReport make_coverage(const Simulator& sim, const LoadedImage& image) {
  CoverageReport report;
  for (const auto& s : image.segments)
    if (s.executable && s.mem_size >= 4)
      report.code.push_back({s.address, s.mem_size & ~3u});
  std::sort(report.code.begin(), report.code.end());

  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const auto& r : report.code) {
    h = mix_in(h, r.base);
    h = mix_in(h, r.size);
    for (std::uint32_t off = 0; off < r.size; off += 4) {
      const std::uint32_t addr = r.base + off;
      const std::uint32_t word = sim.peek(addr, 4).value_or(0);
      h = mix_in(h, word);
      if (auto d = try_decode(word); d && d->cls == InstrClass::kBranch)
        report.static_branches.insert(addr);
    }
  }
  report.layout = h;
  return report;
}

CoverageReport merge_coverage(std::span<const CoverageReport> reports) {
  if (reports.empty()) return {};
  CoverageReport out = reports.front();
  for (const auto& r : reports.subspan(1)) {
    if (r.layout != out.layout || r.code != out.code || r.static_branches != out.static_branches)
      throw Error(Errc::kLayoutMismatch,
                  kv_hex(out.layout, 16) + " vs " + kv_hex(r.layout, 16));
    out.executed.insert(r.executed.begin(), r.executed.end());
    for (const auto& [a, b] : r.branches) {
      auto& m = out.branches[a];
      m.taken = m.taken || b.taken;
      m.not_taken = m.not_taken || b.not_taken;
    }
  }
  return out;
}

CoverageReport parse_coverage(std::string_view text) {
  CoverageReport r;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(Errc::kMalformedCoverage, "line " + std::to_string(line_no) + ": " + why);
  };
  auto num = [&](const std::string& s) -> std::uint64_t {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used, 0);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || s[0] == '-') fail("bad number '" + s + "'");
    return v;
  };
  bool has_layout = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag, a, b, c;
    ls >> tag >> a;
    if (tag == "layout") {
      r.layout = num(a);
      has_layout = true;
    } else if (tag == "code") {
      ls >> b;
      r.code.push_back({static_cast<std::uint32_t>(num(a)), static_cast<std::uint32_t>(num(b))});
    } else if (tag == "static-branch") {
      r.static_branches.insert(static_cast<std::uint32_t>(num(a)));
    } else if (tag == "insn") {
      r.executed.insert(static_cast<std::uint32_t>(num(a)));
    } else if (tag == "branch") {
      ls >> b >> c;
      r.branches[static_cast<std::uint32_t>(num(a))] = {num(b) != 0, num(c) != 0};
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!has_layout) throw Error(Errc::kMalformedCoverage, "missing layout line");
  return r;
}

}  // namespace vplat
