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
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vplat/cpu.hpp"
#include "vplat/loader.hpp"

namespace vplat {

class Simulator;

struct CodeRange {
  std::uint32_t base = 0;
  std::uint32_t size = 0;
  friend bool operator==(const CodeRange&, const CodeRange&) = default;
  friend auto operator<=>(const CodeRange&, const CodeRange&) = default;
};

struct BranchOutcomes {
  bool taken = false;
  bool not_taken = false;
  friend bool operator==(const BranchOutcomes&, const BranchOutcomes&) = default;
};

/// Instruction-address and branch-outcome coverage of one code layout.
struct CoverageReport {
  std::vector<CodeRange> code;            // executable ranges, sorted
  std::uint64_t layout = 0;               // fingerprint of ranges + code bytes
  std::set<std::uint32_t> static_branches;
  std::set<std::uint32_t> executed;
  std::map<std::uint32_t, BranchOutcomes> branches;

  bool in_code(std::uint32_t address) const;
  /// Record one step; addresses outside the code ranges are ignored.
  void record(const StepRecord& step);

  std::uint64_t total_instructions() const;
  std::uint64_t covered_outcomes() const;
  double instruction_percent() const;
  double branch_percent() const;

  /// Line-oriented canonical text; parse_coverage reads it back.
  std::string render() const;

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

/// Empty report for the executable segments of a freshly loaded image.
CoverageReport make_coverage(const Simulator& sim, const LoadedImage& image);

/// Union of reports that share a code layout. Empty input gives an empty
/// report. Throws Error(kLayoutMismatch).
CoverageReport merge_coverage(std::span<const CoverageReport> reports);

/// Throws Error(kMalformedCoverage).
CoverageReport parse_coverage(std::string_view text);

}  // namespace vplat
