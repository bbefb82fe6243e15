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

// Runs a fixture on the library simulator and on the reference interpreter
// and compares the architectural end state.

#include <cstdio>
#include <string>

#include "programs.hpp"
#include "refsim.hpp"
#include "vplat/cpu.hpp"
#include "vplat/loader.hpp"
#include "vplat/platform.hpp"
#include "vplat/simulator.hpp"

namespace rvtest {

struct ConformanceResult {
  bool match = false;
  std::string detail;
  std::uint64_t retired = 0;
};

inline std::string hex(std::uint32_t v) {
  char buf[12];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

inline ConformanceResult run_conformance(const Fixture& fixture,
                                         std::uint64_t limit = 1'000'000) {
  Assembler as(kRomBase);
  fixture.build(as);
  const auto code = as.bytes();

  RefMachine ref;
  ref.pc = kRomBase;
  ref.exit_address = kExitAddress;
  RefRegion rom{kRomBase, std::vector<std::uint8_t>(kRomSize, 0), false};
  std::copy(code.begin(), code.end(), rom.bytes.begin());
  ref.regions.push_back(std::move(rom));
  ref.regions.push_back({kRamBase, std::vector<std::uint8_t>(kRamSize, 0), true});
  ref.regions.push_back({kConsoleBase, std::vector<std::uint8_t>(8, 0), true});
  ref.run(limit);

  auto sim = vplat::instantiate(vplat::parse_platform(fixture_platform_text()));
  const auto image = elf_of(as);
  const auto loaded = vplat::load_binary(*sim, image);
  sim->cpu() = vplat::reset(loaded.entry);
  std::uint64_t retired = 0;
  while (!sim->cpu().halted && retired < limit) {
    const auto o = sim->step();
    if (o.kind != vplat::StepKind::kTrap) ++retired;
  }

  ConformanceResult r;
  r.retired = retired;
  const auto& cpu = sim->cpu();
  auto fail = [&](std::string why) {
    r.detail = fixture.name + ": " + why;
    return r;
  };
  if (ref.stop == RefStop::kLimit || !cpu.halted) return fail("did not terminate");
  if (retired != ref.retired)
    return fail("retired " + std::to_string(retired) + " vs " + std::to_string(ref.retired));
  if (ref.stop == RefStop::kExit) {
    if (!cpu.exit_code || *cpu.exit_code != ref.exit_code) return fail("exit code");
  } else {
    if (!cpu.pending_trap) return fail("expected trap " + ref.trap);
    if (vplat::trap_name(cpu.pending_trap->cause) != ref.trap)
      return fail("trap " + std::string(vplat::trap_name(cpu.pending_trap->cause)) +
                  " vs " + ref.trap);
    if (cpu.pending_trap->value != ref.trap_value)
      return fail("trap value " + hex(cpu.pending_trap->value) + " vs " + hex(ref.trap_value));
  }
  if (cpu.pc != ref.pc) return fail("pc " + hex(cpu.pc) + " vs " + hex(ref.pc));
  for (unsigned i = 0; i < 32; ++i)
    if (cpu.reg(i) != ref.x[i])
      return fail("x" + std::to_string(i) + " " + hex(cpu.reg(i)) + " vs " + hex(ref.x[i]));
  const auto& ram = ref.regions[1].bytes;
  for (std::uint32_t off = 0; off < kRamSize; off += 4) {
    const auto v = sim->peek(kRamBase + off, 4);
    const std::uint32_t e = ram[off] | (ram[off + 1] << 8) | (ram[off + 2] << 16) |
                            (std::uint32_t{ram[off + 3]} << 24);
    if (!v || *v != e) return fail("ram+" + hex(off));
  }
  r.match = true;
  return r;
}

}  // namespace rvtest
