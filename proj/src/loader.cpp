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

#include "vplat/loader.hpp"

#include <elf.h>

#include <fstream>
#include <iterator>

#include "vplat/error.hpp"
#include "vplat/kv.hpp"
#include "vplat/simulator.hpp"

namespace vplat {

namespace {

// Header fields are read byte-wise so loading does not depend on host
// endianness or struct packing.
std::uint32_t le(std::span<const std::uint8_t> b, std::size_t at, unsigned n) {
  std::uint32_t v = 0;
  for (unsigned i = 0; i < n; ++i) v |= std::uint32_t{b[at + i]} << (8 * i);
  return v;
}

[[noreturn]] void unsupported(const std::string& why) {
  throw Error(Errc::kUnsupportedImage, why);
}

LoadedImage load_elf(Simulator& sim, std::span<const std::uint8_t> image) {
  if (image.size() < sizeof(Elf32_Ehdr)) unsupported("truncated header");
  if (image[EI_CLASS] != ELFCLASS32) unsupported("not a 32-bit executable");
  if (image[EI_DATA] != ELFDATA2LSB) unsupported("not little-endian");
  if (le(image, offsetof(Elf32_Ehdr, e_type), 2) != ET_EXEC) unsupported("not ET_EXEC");
  if (le(image, offsetof(Elf32_Ehdr, e_machine), 2) != EM_RISCV)
    unsupported("not a RISC-V executable");

  LoadedImage out;
  out.entry = le(image, offsetof(Elf32_Ehdr, e_entry), 4);
  const std::uint32_t phoff = le(image, offsetof(Elf32_Ehdr, e_phoff), 4);
  const std::uint32_t phentsize = le(image, offsetof(Elf32_Ehdr, e_phentsize), 2);
  const std::uint32_t phnum = le(image, offsetof(Elf32_Ehdr, e_phnum), 2);
  if (phnum != 0 && phentsize < sizeof(Elf32_Phdr)) unsupported("bad program header size");
  if (std::uint64_t{phoff} + std::uint64_t{phentsize} * phnum > image.size())
    unsupported("program headers outside file");

  for (std::uint32_t i = 0; i < phnum; ++i) {
    const std::size_t ph = phoff + std::size_t{i} * phentsize;
    if (le(image, ph + offsetof(Elf32_Phdr, p_type), 4) != PT_LOAD) continue;
    const std::uint32_t offset = le(image, ph + offsetof(Elf32_Phdr, p_offset), 4);
    const std::uint32_t addr = le(image, ph + offsetof(Elf32_Phdr, p_paddr), 4);
    const std::uint32_t filesz = le(image, ph + offsetof(Elf32_Phdr, p_filesz), 4);
    const std::uint32_t memsz = le(image, ph + offsetof(Elf32_Phdr, p_memsz), 4);
    const std::uint32_t flags = le(image, ph + offsetof(Elf32_Phdr, p_flags), 4);
    if (memsz == 0) continue;
    if (filesz > memsz) unsupported("segment file size exceeds memory size");
    if (std::uint64_t{offset} + filesz > image.size()) unsupported("segment outside file");

    const std::string where = kv_hex(addr) + "+" + kv_hex(memsz, 1);
    if (!sim.poke(addr, image.subspan(offset, filesz)))
      throw Error(Errc::kSegmentOutsideMap, where);
    const std::vector<std::uint8_t> zeros(memsz - filesz, 0);
    if (!sim.poke(addr + filesz, zeros)) throw Error(Errc::kSegmentOutsideMap, where);
    out.segments.push_back({addr, filesz, memsz, (flags & PF_X) != 0});
  }
  if (out.segments.empty()) unsupported("no loadable segments");
  return out;
}

}  // namespace

bool is_elf(std::span<const std::uint8_t> image) {
  return image.size() >= 4 && image[0] == ELFMAG0 && image[1] == ELFMAG1 &&
         image[2] == ELFMAG2 && image[3] == ELFMAG3;
}

LoadedImage load_binary(Simulator& sim, std::span<const std::uint8_t> image,
                        std::optional<std::uint32_t> load_address) {
  if (is_elf(image)) return load_elf(sim, image);
  if (!load_address) unsupported("raw image needs an explicit load address");
  if (image.empty()) unsupported("empty image");
  if (std::uint64_t{*load_address} + image.size() > 0x1'0000'0000ull ||
      !sim.poke(*load_address, image))
    throw Error(Errc::kSegmentOutsideMap,
                kv_hex(*load_address) + "+" + kv_hex(image.size(), 1));
  LoadedImage out;
  out.entry = *load_address;
  out.segments.push_back({*load_address, static_cast<std::uint32_t>(image.size()),
                          static_cast<std::uint32_t>(image.size()), true});
  return out;
}

std::uint64_t image_hash(std::span<const std::uint8_t> image) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (auto b : image) {
    h ^= b;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::kIo, "short write to " + path.string());
}

}  // namespace vplat
