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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vplat/coverage.hpp"
#include "vplat/scenario.hpp"

namespace vplat {

/// One scenario path per line; `#` starts a comment. Relative paths are
/// resolved against `base_dir`.
std::vector<std::filesystem::path> parse_scenario_list(
    std::string_view text, const std::filesystem::path& base_dir = {});

struct BatchOptions {
  RunOptions run;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> out_dir;
};

struct BatchResult {
  std::vector<Verdict> verdicts;              // declaration order
  std::vector<CoverageReport> merged;         // one per distinct code layout
  std::string report;                         // aggregated machine-readable report
  std::string summary;                        // human-readable
  bool all_passed() const;
};

/// Run every scenario (up to `jobs` at a time, one simulation instance
/// each). Unreadable scenarios become error verdicts; the batch continues.
/// When out_dir is set, per-scenario artifacts and report.jsonl are written.
BatchResult run_batch(const std::vector<std::filesystem::path>& scenarios,
                      const BatchOptions& options = {});

}  // namespace vplat
