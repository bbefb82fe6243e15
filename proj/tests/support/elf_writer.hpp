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

// Writes minimal ELF32 little-endian RISC-V executables (program headers
// only) for test fixtures.

#include <cstdint>
#include <vector>

namespace rvtest {

struct ElfSegment {
  std::uint32_t address = 0;
  std::vector<std::uint8_t> data;
  std::uint32_t mem_size = 0;  // >= data.size(); the rest is bss
  bool executable = true;
};

inline std::vector<std::uint8_t> write_elf(std::uint32_t entry,
                                           const std::vector<ElfSegment>& segments) {
  std::vector<std::uint8_t> out;
  auto u8 = [&](std::uint8_t v) { out.push_back(v); };
  auto u16 = [&](std::uint16_t v) { u8(v & 0xFF); u8(v >> 8); };
  auto u32 = [&](std::uint32_t v) { u16(v & 0xFFFF); u16(v >> 16); };

  constexpr std::uint32_t kEhdr = 52, kPhdr = 32;
  const auto n = static_cast<std::uint32_t>(segments.size());

  const std::uint8_t ident[16] = {0x7F, 'E', 'L', 'F', 1, 1, 1, 0};
  for (auto b : ident) u8(b);
  u16(2);       // ET_EXEC
  u16(243);     // EM_RISCV
  u32(1);
  u32(entry);
  u32(kEhdr);   // e_phoff
  u32(0);       // e_shoff
  u32(0);       // e_flags
  u16(kEhdr);
  u16(kPhdr);
  u16(static_cast<std::uint16_t>(n));
  u16(40);
  u16(0);
  u16(0);

  std::uint32_t offset = kEhdr + n * kPhdr;
  for (const auto& s : segments) {
    const auto filesz = static_cast<std::uint32_t>(s.data.size());
    u32(1);  // PT_LOAD
    u32(offset);
    u32(s.address);
    u32(s.address);
    u32(filesz);
    u32(s.mem_size > filesz ? s.mem_size : filesz);
    u32(s.executable ? 5u : 6u);  // R+X or R+W
    u32(4);
    offset += filesz;
  }
  for (const auto& s : segments) out.insert(out.end(), s.data.begin(), s.data.end());
  return out;
}

}  // namespace rvtest
