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

#include <random>

#include "oracles.hpp"
#include "vplat/cpu.hpp"
#include "vplat/devices.hpp"
#include "vplat/error.hpp"
#include "vplat/fault.hpp"
#include "vplat/platform.hpp"
#include "vplat/schedule.hpp"

namespace {

using vplat::FaultType;

vplat::Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const vplat::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return vplat::Errc::kIo;
}

vplat::PlatformConfig board() {
  return vplat::parse_platform(R"(
[platform]
entry_point = 0x0
[device.rom]
kind = rom
base = 0x0
size = 0x1000
[device.ram]
kind = ram
base = 0x80000000
size = 0x1000
[device.eeprom0]
kind = eeprom
base = 0x90000000
size = 0x100
)");
}

TEST(ShouldFire, WindowExamples) {
  vplat::Schedule s{100, 200, vplat::EveryHit{}};
  EXPECT_TRUE(vplat::should_fire(s, 150));
  vplat::Schedule t{100, 200, vplat::EveryHit{}};
  EXPECT_FALSE(vplat::should_fire(t, 99));
  EXPECT_FALSE(vplat::should_fire(t, 200));
  EXPECT_EQ(t.hits, 0u);
}

TEST(ShouldFire, EveryThirdHitBruteForce) {
  vplat::Schedule s{0, std::nullopt, vplat::EveryNthHit{3}};
  std::vector<int> fired;
  int independent = 0;
  std::vector<int> expected;
  for (int hit = 1; hit <= 10; ++hit) {
    if (vplat::should_fire(s, 10 + hit)) fired.push_back(hit);
    if (++independent == 3) {
      expected.push_back(hit);
      independent = 0;
    }
  }
  EXPECT_EQ(fired, expected);
  EXPECT_EQ(fired, (std::vector<int>{3, 6, 9}));
}

TEST(ShouldFire, PeriodicOncePerWindow) {
  vplat::Schedule s{10, std::nullopt, vplat::Periodic{100}};
  EXPECT_TRUE(vplat::should_fire(s, 15));
  EXPECT_FALSE(vplat::should_fire(s, 50));
  EXPECT_FALSE(vplat::should_fire(s, 109));
  EXPECT_TRUE(vplat::should_fire(s, 110));
  EXPECT_TRUE(vplat::should_fire(s, 400));
  EXPECT_FALSE(vplat::should_fire(s, 409));
}

TEST(ShouldFire, MatchesBruteForceProperty) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 500; ++trial) {
    rvtest::RefSchedule ref;
    ref.start = rng() % 500;
    if (rng() % 3) ref.stop = ref.start + rng() % 800;
    ref.mode = static_cast<int>(rng() % 3);
    ref.param = 1 + rng() % (ref.mode == 2 ? 90 : 7);
    std::vector<std::uint64_t> events;
    std::uint64_t t = 0;
    for (int i = 0; i < 200; ++i) events.push_back(t += rng() % 12);

    vplat::Schedule s;
    s.start = ref.start;
    s.stop = ref.stop;
    if (ref.mode == 1) s.frequency = vplat::EveryNthHit{ref.param};
    if (ref.mode == 2) s.frequency = vplat::Periodic{ref.param};
    std::set<std::size_t> got;
    for (std::size_t i = 0; i < events.size(); ++i)
      if (vplat::should_fire(s, events[i])) got.insert(i);
    ASSERT_EQ(got, rvtest::reference_firings(ref, events)) << "trial " << trial;
  }
}

TEST(Schedule, ValidationAndFrequencyText) {
  EXPECT_EQ(code_of([] { vplat::validate_schedule({10, 5, vplat::EveryHit{}}); }),
            vplat::Errc::kInvalidFault);
  EXPECT_EQ(code_of([] { vplat::validate_schedule({0, std::nullopt, vplat::EveryNthHit{0}}); }),
            vplat::Errc::kInvalidFault);
  EXPECT_EQ(code_of([] { vplat::validate_schedule({0, std::nullopt, vplat::Periodic{0}}); }),
            vplat::Errc::kInvalidFault);
  for (const vplat::Frequency f :
       {vplat::Frequency{vplat::EveryHit{}}, vplat::Frequency{vplat::EveryNthHit{7}},
        vplat::Frequency{vplat::Periodic{1000}}})
    EXPECT_EQ(vplat::parse_frequency(vplat::render_frequency(f)), f);
  EXPECT_EQ(code_of([] { vplat::parse_frequency("sometimes"); }), vplat::Errc::kInvalidValue);
}

TEST(StreamRng, DeterministicAndIndependent) {
  vplat::StreamRng a(42, "f1", 0), b(42, "f1", 0), c(42, "f2", 0), d(43, "f1", 0);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 100; ++i) {
    va.push_back(a.next());
    vb.push_back(b.next());
    vc.push_back(c.next());
    vd.push_back(d.next());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  EXPECT_NE(va, vd);
  EXPECT_EQ(a.position(), 100u);
}

TEST(StreamRng, UniformCoversInclusiveRange) {
  vplat::StreamRng r(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.uniform(3, 10);
    ASSERT_GE(v, 3u);
    ASSERT_LE(v, 10u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(r.uniform(5, 5), 5u);
}

TEST(ApplyFault, Examples) {
  vplat::StreamRng rng(0);
  vplat::FaultParams p;
  p.mask = 0x1;
  EXPECT_EQ(vplat::apply_fault(0x0, FaultType::kBitFlip, p, rng).value, 0x1u);
  p.mask = 0xFF000000;
  EXPECT_EQ(vplat::apply_fault(0xABCD1234, FaultType::kStuckAt0, p, rng).value, 0x00CD1234u);
  EXPECT_EQ(vplat::apply_fault(0xABCD1234, FaultType::kStuckAt0, p, rng).value,
            rvtest::reference_value_fault(1, 0xABCD1234, 0xFF000000));
  vplat::FaultParams r;
  r.value = 0xDEADBEEF;
  std::mt19937 gen(3);
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(vplat::apply_fault(gen(), FaultType::kValueReplace, r, rng).value, 0xDEADBEEFu);
  vplat::FaultParams d;
  d.delay_cycles = 77;
  EXPECT_EQ(vplat::apply_fault(5, FaultType::kExtraDelay, d, rng).added_latency, 77u);
  EXPECT_TRUE(vplat::apply_fault(5, FaultType::kErrorResponse, {}, rng).error);
  EXPECT_TRUE(vplat::apply_fault(5, FaultType::kDropWrite, {}, rng).drop);
}

TEST(ApplyFault, BitwiseOracleProperty) {
  std::mt19937 gen(5);
  vplat::StreamRng rng(0);
  const FaultType types[] = {FaultType::kBitFlip, FaultType::kStuckAt0, FaultType::kStuckAt1,
                             FaultType::kValueReplace};
  for (int i = 0; i < 4000; ++i) {
    const int t = i % 4;
    const std::uint32_t v = gen(), m = gen();
    vplat::FaultParams p;
    if (t == 3) p.value = m;
    else p.mask = m;
    EXPECT_EQ(vplat::apply_fault(v, types[t], p, rng).value,
              rvtest::reference_value_fault(t, v, m));
  }
}

TEST(ApplyFault, MasklessBitFlipFlipsExactlyOneBitInWidth) {
  vplat::StreamRng rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto out = vplat::apply_fault(0xA5, FaultType::kBitFlip, {}, rng, 8).value;
    EXPECT_EQ(__builtin_popcount(out ^ 0xA5u), 1);
    EXPECT_LT(out, 0x100u);
  }
}

TEST(StateUpset, Examples) {
  auto cpu = vplat::reset(0);
  cpu.set_reg(5, 0x10);
  auto r = vplat::inject_state_upset(cpu, 5, 0);
  EXPECT_EQ(cpu.reg(5), 0x11u);
  EXPECT_EQ(r.pre, 0x10u);
  EXPECT_EQ(r.post, 0x11u);
  EXPECT_FALSE(r.suppressed);
  for (unsigned bit = 0; bit < 32; ++bit) {
    r = vplat::inject_state_upset(cpu, 0, bit);
    EXPECT_EQ(cpu.reg(0), 0u);
    EXPECT_TRUE(r.suppressed);
  }
  vplat::MemoryDevice ram("ram", 0x100, true, 0);
  r = vplat::inject_state_upset(ram, 0, 31);
  EXPECT_EQ(ram.peek(0, 4), 0x80000000u);
  EXPECT_EQ(code_of([&] { vplat::inject_state_upset(cpu, 32, 0); }), vplat::Errc::kInvalidLocus);
  EXPECT_EQ(code_of([&] { vplat::inject_state_upset(ram, 0x100, 0); }),
            vplat::Errc::kInvalidLocus);
}

TEST(CompileCampaign, Examples) {
  const auto pc = board();
  EXPECT_TRUE(vplat::compile_campaign({}, pc).empty());

  const auto c = vplat::parse_campaign(R"(
[campaign]
seed = 5
[fault.flip]
target = ram:read
type = bit_flip
mask = 0x1
[fault.slow]
target = eeprom0
type = internal:slow_response
latency_ms_min = 3
latency_ms_max = 10
)");
  const auto compiled = vplat::compile_campaign(c, pc);
  ASSERT_EQ(compiled.interposers.size(), 1u);
  ASSERT_EQ(compiled.activations.size(), 1u);
  EXPECT_EQ(compiled.interposers[0].spec.id, "flip");
  EXPECT_EQ(compiled.activations[0].spec.id, "slow");
  EXPECT_EQ(compiled.seed, 5u);

  auto bad = c;
  bad.faults[0].target = vplat::DeviceTarget{"uart9", std::nullopt};
  EXPECT_EQ(code_of([&] { vplat::compile_campaign(bad, pc); }), vplat::Errc::kUnknownTarget);
}

TEST(CompileCampaign, Rejections) {
  const auto pc = board();
  auto one = [&](const std::string& body) {
    return code_of([&] {
      vplat::compile_campaign(vplat::parse_campaign("[fault.x]\n" + body), pc);
    });
  };
  EXPECT_EQ(one("target = ram\ntype = internal:slow_response\n"), vplat::Errc::kUnknownDeviceFault);
  EXPECT_EQ(one("target = eeprom0\ntype = internal:fast_response\n"),
            vplat::Errc::kUnknownDeviceFault);
  EXPECT_EQ(one("target = ram\ntype = stuck_at_0\n"), vplat::Errc::kInvalidFault);
  EXPECT_EQ(one("target = ram\ntype = value_replace\n"), vplat::Errc::kInvalidFault);
  EXPECT_EQ(one("target = ram:read\ntype = drop_write\n"), vplat::Errc::kInvalidFault);
  EXPECT_EQ(one("target = reg:32\ntype = state_upset\n"), vplat::Errc::kInvalidLocus);
  EXPECT_EQ(one("target = mem:0x80000002\ntype = state_upset\n"), vplat::Errc::kInvalidLocus);
  EXPECT_EQ(one("target = mem:0x70000000\ntype = state_upset\n"), vplat::Errc::kInvalidLocus);
  EXPECT_EQ(one("target = eeprom0\ntype = internal:slow_response\nlatency_ms_min = 9\n"
                "latency_ms_max = 3\n"),
            vplat::Errc::kInvalidFault);
  EXPECT_EQ(one("target = ram\ntype = bit_flip\nstart = 10\nstop = 5\n"),
            vplat::Errc::kInvalidFault);
  EXPECT_EQ(code_of([&] {
              vplat::compile_campaign(
                  vplat::parse_campaign("[fault.a]\ntarget = ram\ntype = bit_flip\n"
                                        "[fault.a]\ntarget = ram\ntype = bit_flip\n"),
                  pc);
            }),
            vplat::Errc::kDuplicateFaultId);
}

TEST(Campaign, TargetGrammarRoundTrip) {
  for (const char* t : {"ram", "ram:read", "eeprom0:write", "0x80000000-0x800000ff",
                        "0x80000000-0x800000ff:read", "reg:5", "mem:0x80000010"})
    EXPECT_EQ(vplat::render_target(vplat::parse_target(t)), t);
}

TEST(Campaign, RenderParseRoundTrip) {
  const auto c = vplat::parse_campaign(R"(
[campaign]
seed = 0x1234
[fault.a]
target = 0x80000000-0x80000fff:write
type = stuck_at_1
mask = 0xff
start = 10
stop = 5000
frequency = every_nth=3
seed = 99
[fault.b]
target = reg:7
type = state_upset
bit = 4
frequency = period=1000
[fault.c]
target = rom
type = extra_delay
delay_cycles = 12
include_fetch = true
)");
  const auto again = vplat::parse_campaign(vplat::render_campaign(c));
  EXPECT_EQ(again.seed, c.seed);
  EXPECT_EQ(again.faults, c.faults);
}

}  // namespace
