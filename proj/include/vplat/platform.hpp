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
#include <vector>

#include "vplat/bus.hpp"
#include "vplat/devices.hpp"

namespace vplat {

inline constexpr std::uint64_t kDefaultClockHz = 10'000'000;
inline constexpr std::uint32_t kDefaultEepromLatencyMs = 5;

struct DeviceConfig {
  std::string id;
  DeviceKind kind = DeviceKind::kRam;
  std::uint32_t base = 0;
  std::uint32_t size = 0;
  std::uint32_t wait_cycles = 0;                             // rom, ram, eeprom
  std::uint32_t write_latency_ms = kDefaultEepromLatencyMs;  // eeprom only

  friend bool operator==(const DeviceConfig&, const DeviceConfig&) = default;
};

/// Declarative description of a virtual computer.
struct PlatformConfig {
  std::string name;
  std::uint64_t clock_hz = kDefaultClockHz;
  std::uint32_t entry_point = 0;
  std::optional<std::uint32_t> test_exit_address;
  std::vector<DeviceConfig> devices;

  const DeviceConfig* find(std::string_view id) const;

  friend bool operator==(const PlatformConfig&, const PlatformConfig&) = default;
};

/// Parse a platform file:
///
///   [platform]
///   name = demo
///   clock_hz = 10000000
///   entry_point = 0x00000000
///   test_exit_address = 0xFFFFFFF0
///
///   [device.rom0]
///   kind = rom
///   base = 0x00000000
///   size = 0x1000
///
/// Throws Error with kSyntaxError, kUnknownKey, kUnknownDeviceKind,
/// kMissingField, kInvalidValue or kDuplicateId.
PlatformConfig parse_platform(std::string_view text);

/// Canonical serializer; parse_platform(render_platform(c)) == c.
std::string render_platform(const PlatformConfig& config);

/// Memory map of the config's devices (region i backs devices[i]). Also
/// checks that the entry point is mapped.
MemoryMap validate_platform(const PlatformConfig& config);

}  // namespace vplat
