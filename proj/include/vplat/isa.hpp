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
#include <optional>
#include <string>
#include <string_view>

namespace vplat {

/// Instruction classes of the RV32I base integer set.
enum class InstrClass : std::uint8_t {
  kAluImm,
  kAluReg,
  kLoad,
  kStore,
  kBranch,
  kJump,
  kUpperImm,
  kSystem,
};

enum class Op : std::uint8_t {
  // upper-immediate
  kLui, kAuipc,
  // jumps
  kJal, kJalr,
  // branches
  kBeq, kBne, kBlt, kBge, kBltu, kBgeu,
  // loads
  kLb, kLh, kLw, kLbu, kLhu,
  // stores
  kSb, kSh, kSw,
  // alu-immediate
  kAddi, kSlti, kSltiu, kXori, kOri, kAndi, kSlli, kSrli, kSrai,
  // alu-register
  kAdd, kSub, kSll, kSlt, kSltu, kXor, kSrl, kSra, kOr, kAnd,
  // system
  kFence, kEcall, kEbreak,
};

struct DecodedInstruction {
  InstrClass cls;
  Op op;
  std::uint8_t rd = 0;
  std::uint8_t rs1 = 0;
  std::uint8_t rs2 = 0;
  std::int32_t imm = 0;  // sign-extended; shift amount for immediate shifts
  std::uint32_t raw = 0;

  friend bool operator==(const DecodedInstruction&,
                         const DecodedInstruction&) = default;
};

/// Pure decode of one 32-bit instruction word. Throws Error(kIllegalInstruction)
/// for undefined or reserved encodings (including the all-zero word).
DecodedInstruction decode(std::uint32_t word);

/// Non-throwing variant used on the hot path.
std::optional<DecodedInstruction> try_decode(std::uint32_t word) noexcept;

std::string_view mnemonic(Op op);
std::string_view class_name(InstrClass cls);

/// Memory access width of a load or store, 0 for other ops.
unsigned access_width(Op op);

}  // namespace vplat
