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

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "conformance.hpp"
#include "rv32asm.hpp"
#include "vplat/cpu.hpp"
#include "vplat/error.hpp"

namespace {

using namespace rvtest;

// Word-addressed memory behind a BusPort; records every transaction.
class FlatBus : public vplat::BusPort {
 public:
  std::map<std::uint32_t, std::uint32_t> words;
  std::vector<vplat::Transaction> log;
  std::uint64_t latency = 0;

  void load(std::uint32_t at, const Assembler& as) {
    for (auto w : as.words()) {
      words[at] = w;
      at += 4;
    }
  }

  vplat::Response access(const vplat::Transaction& tx) override {
    log.push_back(tx);
    const std::uint32_t aligned = tx.address & ~3u;
    const unsigned shift = 8 * (tx.address & 3);
    const std::uint32_t mask = tx.width == 4 ? 0xFFFFFFFFu : ((1u << (8 * tx.width)) - 1) << shift;
    if (tx.kind == vplat::Access::kRead)
      return vplat::Response::ok((words[aligned] & mask) >> shift, latency);
    words[aligned] = (words[aligned] & ~mask) | ((tx.payload << shift) & mask);
    return vplat::Response::ok(0, latency);
  }
};

TEST(Reset, Examples) {
  const auto s = vplat::reset(0);
  EXPECT_EQ(s.pc, 0u);
  EXPECT_EQ(s.cycles, 0u);
  EXPECT_FALSE(s.halted);
  for (unsigned i = 0; i < 32; ++i) EXPECT_EQ(s.reg(i), 0u);
  EXPECT_EQ(vplat::reset(0x80000000).pc, 0x80000000u);
  try {
    vplat::reset(0x1003);
    FAIL();
  } catch (const vplat::Error& e) {
    EXPECT_EQ(e.code(), vplat::Errc::kMisalignedEntry);
  }
}

TEST(Step, AddImmediate) {
  FlatBus bus;
  Assembler as(0x1000);
  as.addi(ra, zero, 5);
  bus.load(0x1000, as);
  auto s = vplat::reset(0x1000);
  const auto o = vplat::step(s, bus, {});
  EXPECT_EQ(o.kind, vplat::StepKind::kRetired);
  EXPECT_EQ(s.reg(1), 5u);
  EXPECT_EQ(s.pc, 0x1004u);
  EXPECT_EQ(s.cycles, 1u);
  ASSERT_TRUE(o.record.reg_write);
  EXPECT_EQ(o.record.reg_write->index, 1u);
}

TEST(Step, RegisterZeroStaysZero) {
  FlatBus bus;
  Assembler as(0);
  as.addi(zero, zero, 5);
  as.lui(zero, 0xABCDE);
  as.jal(zero, 4);
  bus.load(0, as);
  auto s = vplat::reset(0);
  for (int i = 0; i < 3; ++i) {
    vplat::step(s, bus, {});
    EXPECT_EQ(s.reg(0), 0u);
  }
  s.set_reg(0, 77);
  EXPECT_EQ(s.reg(0), 0u);
}

TEST(Step, MisalignedJumpTraps) {
  FlatBus bus;
  Assembler as(0x1000);
  as.li(t0, 0x1002);
  as.jalr(ra, t0, 0);
  bus.load(0x1000, as);
  auto s = vplat::reset(0x1000);
  while (s.pc != 0x1000 + 4 * (as.words().size() - 1)) vplat::step(s, bus, {});
  const auto before = s;
  const auto o = vplat::step(s, bus, {});
  ASSERT_EQ(o.kind, vplat::StepKind::kTrap);
  EXPECT_EQ(o.trap->cause, vplat::TrapCause::kMisalignedFetch);
  EXPECT_EQ(o.trap->value, 0x1002u);
  EXPECT_EQ(s.pc, before.pc);
  EXPECT_EQ(s.reg(1), 0u);
  EXPECT_TRUE(s.halted);
  // A halted hart does nothing further.
  const auto again = vplat::step(s, bus, {});
  EXPECT_EQ(again.kind, vplat::StepKind::kHalt);
  EXPECT_EQ(s.cycles, before.cycles);
}

TEST(Step, CyclesIncludeTransactionLatency) {
  FlatBus bus;
  bus.latency = 3;
  Assembler as(0);
  as.lw(a0, 0x100, zero);
  as.sw(a0, 0x104, zero);
  as.addi(a1, zero, 1);
  bus.load(0, as);
  auto s = vplat::reset(0);
  vplat::step(s, bus, {});
  EXPECT_EQ(s.cycles, 1u + 3 + 3);
  vplat::step(s, bus, {});
  EXPECT_EQ(s.cycles, 7u + 7);
  vplat::step(s, bus, {});
  EXPECT_EQ(s.cycles, 14u + 4);
  ASSERT_EQ(bus.log.size(), 5u);
  EXPECT_TRUE(bus.log[0].fetch);
  EXPECT_FALSE(bus.log[1].fetch);
  EXPECT_EQ(bus.log[1].issue_cycle, 3u);  // after the fetch latency
}

TEST(Step, TestExitStoreHalts) {
  FlatBus bus;
  Assembler as(0);
  as.addi(a0, zero, 42);
  as.li(t0, 0x40000000);
  as.sw(a0, 0, t0);
  bus.load(0, as);
  vplat::CpuOptions opt;
  opt.test_exit_address = 0x40000000;
  auto s = vplat::reset(0);
  vplat::StepOutcome o;
  while (!s.halted) o = vplat::step(s, bus, opt);
  EXPECT_EQ(o.kind, vplat::StepKind::kHalt);
  ASSERT_TRUE(s.exit_code);
  EXPECT_EQ(*s.exit_code, 42u);
  for (const auto& tx : bus.log) EXPECT_NE(tx.address, 0x40000000u);
}

TEST(Step, DeterministicForIdenticalResponses) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Assembler as(0);
    for (int i = 0; i < 40; ++i) {
      const auto rd = static_cast<Reg>(1 + rng() % 31);
      const auto rs = static_cast<Reg>(rng() % 32);
      switch (rng() % 4) {
        case 0: as.addi(rd, rs, static_cast<int>(rng() % 4096) - 2048); break;
        case 1: as.xor_(rd, rs, static_cast<Reg>(rng() % 32)); break;
        case 2: as.slli(rd, rs, rng() % 32); break;
        default: as.lui(rd, rng() & 0xFFFFF); break;
      }
    }
    FlatBus b1, b2;
    b1.load(0, as);
    b2.load(0, as);
    auto s1 = vplat::reset(0), s2 = vplat::reset(0);
    for (int i = 0; i < 40; ++i) {
      const auto o1 = vplat::step(s1, b1, {});
      const auto o2 = vplat::step(s2, b2, {});
      ASSERT_EQ(o1.record.reg_write.has_value(), o2.record.reg_write.has_value());
    }
    EXPECT_EQ(s1, s2);
    EXPECT_EQ(b1.log, b2.log);
  }
}

class Conformance : public ::testing::TestWithParam<std::size_t> {};

TEST_P(Conformance, MatchesReferenceInterpreter) {
  const auto fixtures = conformance_fixtures();
  const auto r = run_conformance(fixtures[GetParam()]);
  EXPECT_TRUE(r.match) << r.detail;
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Conformance,
                         ::testing::Range<std::size_t>(0, conformance_fixtures().size()),
                         [](const auto& info) { return conformance_fixtures()[info.param].name; });

}  // namespace
