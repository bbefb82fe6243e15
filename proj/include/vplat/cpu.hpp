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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "vplat/bus.hpp"
#include "vplat/isa.hpp"

namespace vplat {

enum class TrapCause : std::uint8_t {
  kIllegalInstruction,
  kMisalignedFetch,
  kMisalignedAccess,
  kBusError,
  kEnvironmentCall,
  kBreakpoint,
};

std::string_view trap_name(TrapCause cause);

struct Trap {
  TrapCause cause;
  std::uint32_t value = 0;
  friend bool operator==(const Trap&, const Trap&) = default;
};

inline constexpr std::size_t kNumRegs = 32;

/// Architectural state of the simulated hart.
class CpuState {
 public:
  std::uint32_t pc = 0;
  std::uint64_t cycles = 0;
  bool halted = false;
  std::optional<Trap> pending_trap;
  std::optional<std::uint32_t> exit_code;

  std::uint32_t reg(std::size_t i) const { return i == 0 ? 0 : regs_[i]; }
  void set_reg(std::size_t i, std::uint32_t v) {
    if (i != 0) regs_[i] = v;
  }
  const std::array<std::uint32_t, kNumRegs>& regs() const { return regs_; }

  friend bool operator==(const CpuState&, const CpuState&) = default;

 private:
  std::array<std::uint32_t, kNumRegs> regs_{};
};

/// Throws Error(kMisalignedEntry) unless entry is 4-byte aligned.
CpuState reset(std::uint32_t entry);

struct MemOp {
  Access kind = Access::kRead;
  std::uint32_t address = 0;
  std::uint8_t width = 4;
  std::uint32_t value = 0;  // value loaded (post sign/zero extension: raw) or stored
  Status status = Status::kOk;
};

struct RegWrite {
  std::uint8_t index = 0;
  std::uint32_t value = 0;
};

/// Everything one step did, for traces and coverage.
struct StepRecord {
  std::uint64_t cycle = 0;  // cycle count when the step began
  std::uint32_t pc = 0;
  std::uint32_t raw = 0;
  std::optional<DecodedInstruction> insn;
  std::optional<RegWrite> reg_write;
  std::optional<MemOp> mem;
  std::optional<bool> branch_taken;
};

enum class StepKind : std::uint8_t { kRetired, kTrap, kHalt };

struct StepOutcome {
  StepKind kind = StepKind::kRetired;
  StepRecord record;
  std::optional<Trap> trap;
};

struct CpuOptions {
  /// A store here halts the core and records the stored value as exit code.
  std::optional<std::uint32_t> test_exit_address;
};

/// Fetch, decode and execute exactly one instruction. Traps halt the core
/// and are reported in the outcome and in state.pending_trap. Stepping a
/// halted core is a no-op that reports kHalt.
StepOutcome step(CpuState& state, BusPort& bus, const CpuOptions& options = {});

}  // namespace vplat
