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

// Hand-rolled random generators for property tests.

#include <algorithm>
#include <random>
#include <string>

#include "vplat/devices.hpp"
#include "vplat/platform.hpp"

namespace rvtest {

inline std::string random_name(std::mt19937_64& rng) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 _-#=\"\\[]\t\n";
  std::string s;
  const auto n = rng() % 16;
  for (std::uint64_t i = 0; i < n; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
  if (rng() % 8 == 0) s.push_back(static_cast<char>(1 + rng() % 31));
  return s;
}

/// A valid platform: disjoint, aligned regions and an entry point inside one.
inline vplat::PlatformConfig random_platform(std::mt19937_64& rng) {
  using vplat::DeviceKind;
  vplat::PlatformConfig c;
  c.name = random_name(rng);
  c.clock_hz = 1000 + rng() % 200'000'000;
  const unsigned n = 1 + rng() % 7;
  std::uint64_t cursor = 4 * (rng() % 0x4000);
  for (unsigned i = 0; i < n; ++i) {
    vplat::DeviceConfig d;
    d.id = "d" + std::to_string(i) + (rng() % 2 ? "_x" : "");
    d.kind = static_cast<DeviceKind>(rng() % 5);
    switch (d.kind) {
      case DeviceKind::kTimer: d.size = 16 + 4 * static_cast<std::uint32_t>(rng() % 4); break;
      case DeviceKind::kConsole: d.size = 8 + 4 * static_cast<std::uint32_t>(rng() % 4); break;
      case DeviceKind::kEeprom: d.size = 8 + 4 * static_cast<std::uint32_t>(rng() % 1024); break;
      default: d.size = 4 * static_cast<std::uint32_t>(1 + rng() % 0x10000); break;
    }
    if (d.kind == DeviceKind::kRom || d.kind == DeviceKind::kRam || d.kind == DeviceKind::kEeprom)
      d.wait_cycles = static_cast<std::uint32_t>(rng() % 5);
    d.write_latency_ms = d.kind == DeviceKind::kEeprom ? static_cast<std::uint32_t>(rng() % 20)
                                                       : vplat::kDefaultEepromLatencyMs;
    if (cursor + d.size > 0x100000000ull) break;
    d.base = static_cast<std::uint32_t>(cursor);
    cursor += d.size + 4 * (rng() % 0x1000);
    c.devices.push_back(d);
  }
  const auto& host = c.devices[rng() % c.devices.size()];
  c.entry_point = host.base + 4 * static_cast<std::uint32_t>(rng() % (host.size / 4));
  if (rng() % 2) c.test_exit_address = static_cast<std::uint32_t>(rng()) & ~3u;
  // Shuffle declaration order; the map sorts regions itself.
  std::shuffle(c.devices.begin(), c.devices.end(), rng);
  return c;
}

}  // namespace rvtest

#include "programs.hpp"

namespace rvtest {

/// Trap-free random program: ALU work, aligned RAM traffic through s0,
/// console output, then exit with the low byte of a result register.
inline Assembler random_program(std::mt19937_64& rng, unsigned length = 60) {
  static const Reg pool[] = {a0, a1, a2, a3, a4, a5, t0, t1, t2, s1, s2, s3};
  auto pick = [&] { return pool[rng() % std::size(pool)]; };
  Assembler as(kRomBase);
  as.li(s0, kRamBase);
  as.li(s4, kConsoleBase);
  for (Reg r : pool) as.li(r, static_cast<std::uint32_t>(rng()));
  for (unsigned i = 0; i < length; ++i) {
    const Reg rd = pick(), x = pick(), y = pick();
    const auto imm = static_cast<std::int32_t>(rng() % 4096) - 2048;
    const auto slot = static_cast<std::int32_t>(4 * (rng() % 64));
    switch (rng() % 12) {
      case 0: as.add(rd, x, y); break;
      case 1: as.sub(rd, x, y); break;
      case 2: as.xor_(rd, x, y); break;
      case 3: as.sra(rd, x, y); break;
      case 4: as.addi(rd, x, imm); break;
      case 5: as.slli(rd, x, rng() % 32); break;
      case 6: as.sltu(rd, x, y); break;
      case 7: as.sw(x, slot, s0); break;
      case 8: as.lw(rd, slot, s0); break;
      case 9: as.sb(x, slot + static_cast<std::int32_t>(rng() % 4), s0); break;
      case 10: as.lhu(rd, slot + 2 * static_cast<std::int32_t>(rng() % 2), s0); break;
      default: as.sw(x, 0, s4); break;
    }
  }
  const Reg result = pick();
  as.andi(result, result, 0xFF);
  exit_with(as, result);
  return as;
}

/// A valid campaign for the fixture platform mixing transaction faults,
/// device-internal faults and state upsets.
inline std::string random_campaign_text(std::mt19937_64& rng, unsigned faults = 4) {
  static const char* kTransaction[] = {"bit_flip", "stuck_at_0", "stuck_at_1", "value_replace",
                                       "extra_delay", "drop_write"};
  std::string out = "[campaign]\nseed = " + std::to_string(rng() % 100000) + "\n";
  for (unsigned i = 0; i < faults; ++i) {
    out += "\n[fault.f" + std::to_string(i) + "]\n";
    switch (rng() % 4) {
      case 0:
      case 1: {
        const std::string type = kTransaction[rng() % std::size(kTransaction)];
        const char* kinds[] = {"", ":read", ":write"};
        out += "target = ram" + std::string(type == "drop_write" ? ":write" : kinds[rng() % 3]) + "\n";
        out += "type = " + type + "\n";
        if (type == "value_replace") out += "value = " + std::to_string(rng() % 0x10000) + "\n";
        else if (type == "extra_delay") out += "delay_cycles = " + std::to_string(rng() % 50) + "\n";
        else if (type != "drop_write" && (type != "bit_flip" || rng() % 2))
          out += "mask = " + std::to_string(rng() % 0x100000000ull) + "\n";
        break;
      }
      case 2:
        out += "target = console\ntype = internal:drop_byte\n";
        break;
      default:
        out += "target = reg:" + std::to_string(1 + rng() % 31) + "\ntype = state_upset\n";
        break;
    }
    out += "start = " + std::to_string(rng() % 200) + "\n";
    switch (rng() % 3) {
      case 0: out += "frequency = every\n"; break;
      case 1: out += "frequency = every_nth=" + std::to_string(1 + rng() % 5) + "\n"; break;
      default: out += "frequency = period=" + std::to_string(1 + rng() % 100) + "\n"; break;
    }
    out += "seed = " + std::to_string(rng() % 1000) + "\n";
  }
  return out;
}

}  // namespace rvtest
