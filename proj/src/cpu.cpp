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

#include "vplat/cpu.hpp"

#include <cstdio>

#include "vplat/error.hpp"

namespace vplat {

std::string_view trap_name(TrapCause cause) {
  switch (cause) {
    case TrapCause::kIllegalInstruction: return "illegal-instruction";
    case TrapCause::kMisalignedFetch: return "misaligned-fetch";
    case TrapCause::kMisalignedAccess: return "misaligned-access";
    case TrapCause::kBusError: return "bus-error";
    case TrapCause::kEnvironmentCall: return "environment-call";
    case TrapCause::kBreakpoint: return "breakpoint";
  }
  return "?";
}

CpuState reset(std::uint32_t entry) {
  if (entry % 4 != 0) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", entry);
    throw Error(Errc::kMisalignedEntry, buf);
  }
  CpuState s;
  s.pc = entry;
  return s;
}

namespace {

std::int32_t as_signed(std::uint32_t v) { return static_cast<std::int32_t>(v); }

std::uint32_t extend_load(Op op, std::uint32_t raw) {
  switch (op) {
    case Op::kLb: return static_cast<std::uint32_t>(static_cast<std::int8_t>(raw));
    case Op::kLh: return static_cast<std::uint32_t>(static_cast<std::int16_t>(raw));
    case Op::kLbu: return raw & 0xFFu;
    case Op::kLhu: return raw & 0xFFFFu;
    default: return raw;
  }
}

bool branch_taken(Op op, std::uint32_t a, std::uint32_t b) {
  switch (op) {
    case Op::kBeq: return a == b;
    case Op::kBne: return a != b;
    case Op::kBlt: return as_signed(a) < as_signed(b);
    case Op::kBge: return as_signed(a) >= as_signed(b);
    case Op::kBltu: return a < b;
    case Op::kBgeu: return a >= b;
    default: return false;
  }
}

std::uint32_t alu(Op op, std::uint32_t a, std::uint32_t b) {
  switch (op) {
    case Op::kAdd: case Op::kAddi: return a + b;
    case Op::kSub: return a - b;
    case Op::kSll: case Op::kSlli: return a << (b & 31);
    case Op::kSlt: case Op::kSlti: return as_signed(a) < as_signed(b) ? 1 : 0;
    case Op::kSltu: case Op::kSltiu: return a < b ? 1 : 0;
    case Op::kXor: case Op::kXori: return a ^ b;
    case Op::kSrl: case Op::kSrli: return a >> (b & 31);
    case Op::kSra: case Op::kSrai:
      return static_cast<std::uint32_t>(as_signed(a) >> (b & 31));
    case Op::kOr: case Op::kOri: return a | b;
    case Op::kAnd: case Op::kAndi: return a & b;
    default: return 0;
  }
}

}  // namespace

StepOutcome step(CpuState& s, BusPort& bus, const CpuOptions& options) {
  StepOutcome out;
  StepRecord& rec = out.record;
  rec.cycle = s.cycles;
  rec.pc = s.pc;
  if (s.halted) {
    out.kind = StepKind::kHalt;
    out.trap = s.pending_trap;
    return out;
  }

  std::uint64_t latency = 0;
  auto raise = [&](TrapCause cause, std::uint32_t value) {
    s.cycles += latency;
    s.halted = true;
    s.pending_trap = Trap{cause, value};
    out.kind = StepKind::kTrap;
    out.trap = s.pending_trap;
    return out;
  };

  if (s.pc % 4 != 0) return raise(TrapCause::kMisalignedFetch, s.pc);

  Transaction fetch;
  fetch.kind = Access::kRead;
  fetch.address = s.pc;
  fetch.width = 4;
  fetch.initiator = kInitiatorCpu;
  fetch.issue_cycle = s.cycles;
  fetch.fetch = true;
  const Response fr = bus.access(fetch);
  latency += fr.latency;
  if (fr.status != Status::kOk) return raise(TrapCause::kBusError, s.pc);
  rec.raw = fr.payload;

  const auto decoded = try_decode(fr.payload);
  if (!decoded) return raise(TrapCause::kIllegalInstruction, fr.payload);
  const DecodedInstruction& d = *decoded;
  rec.insn = d;

  const std::uint32_t a = s.reg(d.rs1);
  const std::uint32_t b = s.reg(d.rs2);
  const auto imm = static_cast<std::uint32_t>(d.imm);
  std::uint32_t next_pc = s.pc + 4;
  std::optional<std::uint32_t> result;
  bool halt = false;

  switch (d.cls) {
    case InstrClass::kAluImm:
      result = alu(d.op, a, imm);
      break;
    case InstrClass::kAluReg:
      result = alu(d.op, a, b);
      break;
    case InstrClass::kUpperImm:
      result = d.op == Op::kLui ? imm : s.pc + imm;
      break;
    case InstrClass::kJump: {
      const std::uint32_t target =
          d.op == Op::kJal ? s.pc + imm : (a + imm) & ~1u;
      if (target % 4 != 0) return raise(TrapCause::kMisalignedFetch, target);
      result = s.pc + 4;
      next_pc = target;
      break;
    }
    case InstrClass::kBranch: {
      const bool taken = branch_taken(d.op, a, b);
      rec.branch_taken = taken;
      if (taken) {
        const std::uint32_t target = s.pc + imm;
        if (target % 4 != 0) return raise(TrapCause::kMisalignedFetch, target);
        next_pc = target;
      }
      break;
    }
    case InstrClass::kLoad: {
      const std::uint32_t addr = a + imm;
      const unsigned width = access_width(d.op);
      if (addr % width != 0) return raise(TrapCause::kMisalignedAccess, addr);
      Transaction tx;
      tx.kind = Access::kRead;
      tx.address = addr;
      tx.width = static_cast<std::uint8_t>(width);
      tx.initiator = kInitiatorCpu;
      tx.issue_cycle = s.cycles + latency;
      const Response r = bus.access(tx);
      latency += r.latency;
      if (r.status == Status::kBusError) return raise(TrapCause::kBusError, addr);
      rec.mem = MemOp{Access::kRead, addr, tx.width, r.payload, r.status};
      result = extend_load(d.op, r.payload);
      break;
    }
    case InstrClass::kStore: {
      const std::uint32_t addr = a + imm;
      const unsigned width = access_width(d.op);
      if (addr % width != 0) return raise(TrapCause::kMisalignedAccess, addr);
      const std::uint32_t value =
          width == 4 ? b : b & ((1u << (8 * width)) - 1u);
      if (options.test_exit_address && addr == *options.test_exit_address) {
        rec.mem = MemOp{Access::kWrite, addr, static_cast<std::uint8_t>(width),
                        value, Status::kOk};
        s.exit_code = value;
        halt = true;
        break;
      }
      Transaction tx;
      tx.kind = Access::kWrite;
      tx.address = addr;
      tx.width = static_cast<std::uint8_t>(width);
      tx.payload = value;
      tx.initiator = kInitiatorCpu;
      tx.issue_cycle = s.cycles + latency;
      const Response r = bus.access(tx);
      latency += r.latency;
      if (r.status == Status::kBusError) return raise(TrapCause::kBusError, addr);
      rec.mem = MemOp{Access::kWrite, addr, tx.width, value, r.status};
      break;
    }
    case InstrClass::kSystem:
      if (d.op == Op::kEcall) return raise(TrapCause::kEnvironmentCall, 0);
      if (d.op == Op::kEbreak) return raise(TrapCause::kBreakpoint, s.pc);
      break;  // fence
  }

  if (result && d.rd != 0) {
    s.set_reg(d.rd, *result);
    rec.reg_write = RegWrite{d.rd, *result};
  }
  s.pc = next_pc;
  s.cycles += 1 + latency;
  if (halt) {
    s.halted = true;
    out.kind = StepKind::kHalt;
  }
  return out;
}

}  // namespace vplat
