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

#include "vplat/cpu.hpp"

namespace vplat {

/// One trace line per step:
///
///   cycle pc raw-word mnemonic [reg-write] [mem-op]
///
///   0000000000000003 00000008 00500093 addi x1=00000005
///   0000000000000004 0000000c 00112023 sw w4@80000000=00000005
///
/// cycle is 16 hex digits, pc and raw 8. A reg-write is `xN=value`; a
/// mem-op is `r|w<width>@address=value`, suffixed `!busy` when the device
/// answered device-busy. A trapping step prints `trap:<cause>` as its
/// mnemonic followed by `val=<value>`.
std::string format_trace_line(const StepOutcome& outcome);

struct TraceDiff {
  bool equal = true;
  std::size_t line = 0;  // 1-based line of the first divergence
  std::uint64_t cycle = 0;
  std::string field;     // cycle, pc, raw, mnemonic, reg, mem, effect, length
  std::string a;
  std::string b;
};

/// First divergence between two traces produced by format_trace_line.
/// Throws Error(kMalformedTrace).
TraceDiff diff_traces(std::string_view a, std::string_view b);

}  // namespace vplat
