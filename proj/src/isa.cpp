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

#include "vplat/isa.hpp"

#include <array>
#include <cstdio>

#include "vplat/error.hpp"

namespace vplat {

namespace {

constexpr std::uint32_t bits(std::uint32_t w, unsigned hi, unsigned lo) {
  return (w >> lo) & ((1u << (hi - lo + 1)) - 1u);
}

constexpr std::int32_t sign_extend(std::uint32_t value, unsigned width) {
  const std::uint32_t m = 1u << (width - 1);
  return static_cast<std::int32_t>((value ^ m) - m);
}

std::int32_t imm_i(std::uint32_t w) { return sign_extend(bits(w, 31, 20), 12); }

std::int32_t imm_s(std::uint32_t w) {
  return sign_extend((bits(w, 31, 25) << 5) | bits(w, 11, 7), 12);
}

std::int32_t imm_b(std::uint32_t w) {
  const std::uint32_t v = (bits(w, 31, 31) << 12) | (bits(w, 7, 7) << 11) |
                          (bits(w, 30, 25) << 5) | (bits(w, 11, 8) << 1);
  return sign_extend(v, 13);
}

std::int32_t imm_u(std::uint32_t w) {
  return static_cast<std::int32_t>(w & 0xFFFFF000u);
}

std::int32_t imm_j(std::uint32_t w) {
  const std::uint32_t v = (bits(w, 31, 31) << 20) | (bits(w, 19, 12) << 12) |
                          (bits(w, 20, 20) << 11) | (bits(w, 30, 21) << 1);
  return sign_extend(v, 21);
}

DecodedInstruction make(InstrClass cls, Op op, std::uint32_t w,
                        std::int32_t imm) {
  DecodedInstruction d{};
  d.cls = cls;
  d.op = op;
  d.raw = w;
  d.imm = imm;
  // Only keep register fields the format actually has, so decode output is
  // canonical for a given instruction.
  switch (cls) {
    case InstrClass::kAluReg:
      d.rd = bits(w, 11, 7);
      d.rs1 = bits(w, 19, 15);
      d.rs2 = bits(w, 24, 20);
      break;
    case InstrClass::kAluImm:
    case InstrClass::kLoad:
      d.rd = bits(w, 11, 7);
      d.rs1 = bits(w, 19, 15);
      break;
    case InstrClass::kStore:
    case InstrClass::kBranch:
      d.rs1 = bits(w, 19, 15);
      d.rs2 = bits(w, 24, 20);
      break;
    case InstrClass::kJump:
      d.rd = bits(w, 11, 7);
      if (op == Op::kJalr) d.rs1 = bits(w, 19, 15);
      break;
    case InstrClass::kUpperImm:
      d.rd = bits(w, 11, 7);
      break;
    case InstrClass::kSystem:
      break;
  }
  return d;
}

}  // namespace

std::optional<DecodedInstruction> try_decode(std::uint32_t w) noexcept {
  if ((w & 0x3u) != 0x3u) return std::nullopt;  // compressed / all-zero
  const std::uint32_t opcode = bits(w, 6, 0);
  const std::uint32_t f3 = bits(w, 14, 12);
  const std::uint32_t f7 = bits(w, 31, 25);

  switch (opcode) {
    case 0x37:
      return make(InstrClass::kUpperImm, Op::kLui, w, imm_u(w));
    case 0x17:
      return make(InstrClass::kUpperImm, Op::kAuipc, w, imm_u(w));
    case 0x6F:
      return make(InstrClass::kJump, Op::kJal, w, imm_j(w));
    case 0x67:
      if (f3 != 0) return std::nullopt;
      return make(InstrClass::kJump, Op::kJalr, w, imm_i(w));
    case 0x63: {
      static constexpr std::array<std::optional<Op>, 8> kOps = {
          Op::kBeq, Op::kBne, std::nullopt, std::nullopt,
          Op::kBlt, Op::kBge, Op::kBltu,    Op::kBgeu};
      if (!kOps[f3]) return std::nullopt;
      return make(InstrClass::kBranch, *kOps[f3], w, imm_b(w));
    }
    case 0x03: {
      static constexpr std::array<std::optional<Op>, 8> kOps = {
          Op::kLb,  Op::kLh,  Op::kLw,      std::nullopt,
          Op::kLbu, Op::kLhu, std::nullopt, std::nullopt};
      if (!kOps[f3]) return std::nullopt;
      return make(InstrClass::kLoad, *kOps[f3], w, imm_i(w));
    }
    case 0x23: {
      static constexpr std::array<Op, 3> kOps = {Op::kSb, Op::kSh, Op::kSw};
      if (f3 > 2) return std::nullopt;
      return make(InstrClass::kStore, kOps[f3], w, imm_s(w));
    }
    case 0x13: {
      switch (f3) {
        case 0: return make(InstrClass::kAluImm, Op::kAddi, w, imm_i(w));
        case 2: return make(InstrClass::kAluImm, Op::kSlti, w, imm_i(w));
        case 3: return make(InstrClass::kAluImm, Op::kSltiu, w, imm_i(w));
        case 4: return make(InstrClass::kAluImm, Op::kXori, w, imm_i(w));
        case 6: return make(InstrClass::kAluImm, Op::kOri, w, imm_i(w));
        case 7: return make(InstrClass::kAluImm, Op::kAndi, w, imm_i(w));
        case 1:
          if (f7 != 0) return std::nullopt;
          return make(InstrClass::kAluImm, Op::kSlli, w,
                      static_cast<std::int32_t>(bits(w, 24, 20)));
        case 5:
          if (f7 == 0x00)
            return make(InstrClass::kAluImm, Op::kSrli, w,
                        static_cast<std::int32_t>(bits(w, 24, 20)));
          if (f7 == 0x20)
            return make(InstrClass::kAluImm, Op::kSrai, w,
                        static_cast<std::int32_t>(bits(w, 24, 20)));
          return std::nullopt;
      }
      return std::nullopt;
    }
    case 0x33: {
      if (f7 == 0x00) {
        static constexpr std::array<Op, 8> kOps = {
            Op::kAdd, Op::kSll, Op::kSlt, Op::kSltu,
            Op::kXor, Op::kSrl, Op::kOr,  Op::kAnd};
        return make(InstrClass::kAluReg, kOps[f3], w, 0);
      }
      if (f7 == 0x20) {
        if (f3 == 0) return make(InstrClass::kAluReg, Op::kSub, w, 0);
        if (f3 == 5) return make(InstrClass::kAluReg, Op::kSra, w, 0);
      }
      return std::nullopt;
    }
    case 0x0F:
      // FENCE executes as a no-op on a single in-order hart.
      if (f3 != 0) return std::nullopt;
      return make(InstrClass::kSystem, Op::kFence, w, 0);
    case 0x73:
      if (w == 0x00000073u) return make(InstrClass::kSystem, Op::kEcall, w, 0);
      if (w == 0x00100073u) return make(InstrClass::kSystem, Op::kEbreak, w, 0);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

DecodedInstruction decode(std::uint32_t word) {
  if (auto d = try_decode(word)) return *d;
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", word);
  throw Error(Errc::kIllegalInstruction, buf);
}

std::string_view mnemonic(Op op) {
  static constexpr std::array<std::string_view, 40> kNames = {
      "lui",  "auipc", "jal",  "jalr", "beq",   "bne",  "blt",  "bge",
      "bltu", "bgeu",  "lb",   "lh",   "lw",    "lbu",  "lhu",  "sb",
      "sh",   "sw",    "addi", "slti", "sltiu", "xori", "ori",  "andi",
      "slli", "srli",  "srai", "add",  "sub",   "sll",  "slt",  "sltu",
      "xor",  "srl",   "sra",  "or",   "and",   "fence", "ecall", "ebreak"};
  return kNames[static_cast<std::size_t>(op)];
}

std::string_view class_name(InstrClass cls) {
  switch (cls) {
    case InstrClass::kAluImm: return "alu-imm";
    case InstrClass::kAluReg: return "alu-reg";
    case InstrClass::kLoad: return "load";
    case InstrClass::kStore: return "store";
    case InstrClass::kBranch: return "branch";
    case InstrClass::kJump: return "jump";
    case InstrClass::kUpperImm: return "upper-imm";
    case InstrClass::kSystem: return "system";
  }
  return "?";
}

unsigned access_width(Op op) {
  switch (op) {
    case Op::kLb: case Op::kLbu: case Op::kSb: return 1;
    case Op::kLh: case Op::kLhu: case Op::kSh: return 2;
    case Op::kLw: case Op::kSw: return 4;
    default: return 0;
  }
}

}  // namespace vplat
