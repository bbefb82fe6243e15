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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vplat {

class Simulator;

struct LoadedSegment {
  std::uint32_t address = 0;
  std::uint32_t file_size = 0;
  std::uint32_t mem_size = 0;
  bool executable = false;

  friend bool operator==(const LoadedSegment&, const LoadedSegment&) = default;
};

struct LoadedImage {
  std::uint32_t entry = 0;
  std::vector<LoadedSegment> segments;
};

/// Copy an image into simulated memory without touching the input bytes.
///
/// 32-bit little-endian RISC-V executables are detected by their header;
/// their PT_LOAD segments are copied (bss zero-filled) and the entry comes
/// from the header. Anything else is a raw image and needs `load_address`,
/// which is also its entry point.
///
/// Throws Error(kUnsupportedImage) or Error(kSegmentOutsideMap).
LoadedImage load_binary(Simulator& sim, std::span<const std::uint8_t> image,
                        std::optional<std::uint32_t> load_address = {});

bool is_elf(std::span<const std::uint8_t> image);

/// Stable 64-bit fingerprint (FNV-1a) of an image.
std::uint64_t image_hash(std::span<const std::uint8_t> image);

/// Throws Error(kIo).
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace vplat
