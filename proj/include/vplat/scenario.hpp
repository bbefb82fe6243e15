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
#include "vplat/fault.hpp"
#include "vplat/platform.hpp"

namespace vplat {

enum class StopKind : std::uint8_t { kExit, kCycles, kPc };

struct StopCondition {
  StopKind kind = StopKind::kExit;
  std::uint32_t pc = 0;
  std::uint64_t max_cycles = 10'000'000;  // always enforced as a backstop
};

/// A write delivered to a device at a given cycle, before the step that
/// starts at or after that cycle.
struct Stimulus {
  std::uint64_t cycle = 0;
  std::string device;
  std::uint32_t offset = 0;
  std::uint32_t value = 0;
  unsigned width = 4;
};

enum class AssertionKind : std::uint8_t {
  kRegister,
  kMemory,
  kConsole,
  kExitCode,
  kDeviceStatus,
};

struct Assertion {
  AssertionKind kind = AssertionKind::kExitCode;
  std::string device;           // device status
  std::uint32_t where = 0;      // register index, address or device offset
  unsigned width = 4;
  std::uint32_t expected = 0;
  std::string expected_text;    // console
  std::string source;           // as written, for reports
};

/// Test granularities the same engine serves.
inline constexpr std::string_view kGranularities[] = {
    "low-level", "software-integration", "hardware-software-integration",
    "final-integration"};

struct TestScenario {
  std::string id;
  std::string granularity = "low-level";
  std::filesystem::path platform;
  std::filesystem::path binary;
  std::optional<std::uint32_t> load_address;
  std::optional<std::filesystem::path> campaign;
  std::optional<std::uint64_t> seed;
  StopCondition stop;
  std::vector<Stimulus> stimuli;
  std::vector<Assertion> assertions;
};

/// Parse a scenario file ([scenario], [stimuli], [assert] sections).
/// Relative file references are resolved against `base_dir`.
TestScenario parse_scenario(std::string_view text,
                            const std::filesystem::path& base_dir = {});

/// Everything a run consumes, already read from disk.
struct ScenarioInputs {
  PlatformConfig platform;
  std::vector<std::uint8_t> image;
  std::optional<FaultCampaign> campaign;
};

/// Throws on unreadable or invalid referenced files.
ScenarioInputs load_inputs(const TestScenario& scenario);

enum class Outcome : std::uint8_t { kPass, kFail, kError };
std::string_view outcome_name(Outcome outcome);

struct AssertionResult {
  std::string description;
  bool passed = false;
  std::string actual;
};

struct Verdict {
  std::string scenario_id;
  Outcome outcome = Outcome::kError;
  std::string stop_reason;  // exit, cycles, pc, trap, error
  std::string diagnostic;
  std::vector<AssertionResult> assertions;
  std::uint64_t cycles = 0;
  std::uint64_t instructions = 0;
  std::uint64_t fault_activations = 0;
  double coverage_percent = 0.0;
  double branch_coverage_percent = 0.0;
  std::optional<std::uint32_t> exit_code;
  std::string trace_path;
  std::string coverage_path;
  std::string fault_log_path;
};

struct RunOptions {
  bool trace = true;
  std::optional<std::uint64_t> seed_override;
  /// false runs the scenario as if no fault engine existed (the campaign,
  /// if any, is ignored entirely).
  bool fault_engine = true;
};

struct RunResult {
  Verdict verdict;
  std::string trace;
  std::string fault_log;
  CoverageReport coverage;
  std::string console;
  std::uint64_t image_hash_before = 0;
  std::uint64_t image_hash_after = 0;
};

RunResult run_scenario(const TestScenario& scenario, const ScenarioInputs& inputs,
                       const RunOptions& options = {});

/// Reads the referenced files then runs. Unreadable or invalid inputs give
/// an error verdict instead of throwing.
RunResult run_scenario(const TestScenario& scenario, const RunOptions& options = {});

/// Write <id>.trace, <id>.cov, <id>.faults and <id>.verdict.json into `dir`
/// and record their paths in the verdict.
void write_artifacts(RunResult& result, const std::filesystem::path& dir);

/// One-line machine-readable record.
std::string verdict_json(const Verdict& verdict);
/// Human-readable multi-line summary.
std::string verdict_summary(const Verdict& verdict);

}  // namespace vplat
