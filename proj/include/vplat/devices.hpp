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

#include "vplat/device.hpp"

namespace vplat {

enum class DeviceKind : std::uint8_t { kRom, kRam, kEeprom, kTimer, kConsole };

std::string_view kind_name(DeviceKind kind);
std::optional<DeviceKind> parse_kind(std::string_view text);
/// Internal faulty behaviors each kind embeds.
std::vector<std::string> device_fault_names(DeviceKind kind);

/// Milliseconds to cycles at the platform clock, floor division.
std::uint64_t ms_to_cycles(std::uint64_t ms, std::uint64_t clock_hz);

/// Byte-addressable little-endian storage; ROM rejects bus writes.
class MemoryDevice : public Device {
 public:
  MemoryDevice(std::string id, std::uint32_t size, bool writable,
               std::uint32_t wait_cycles = 0);

  std::string_view kind() const override { return writable_ ? "ram" : "rom"; }
  Response read(std::uint32_t offset, unsigned width, std::uint64_t now) override;
  Response write(std::uint32_t offset, unsigned width, std::uint32_t value,
                 std::uint64_t now) override;
  std::uint32_t peek(std::uint32_t offset, unsigned width) const override;
  bool poke(std::uint32_t offset, unsigned width, std::uint32_t value) override;
  std::string snapshot() const override;

  std::span<const std::uint8_t> bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  bool writable_;
  std::uint32_t wait_cycles_;
};

/// Byte-programmable EEPROM with a busy flag.
///
/// Layout: data cells at offsets [0, cells), status word at offset `cells`
/// (bit 0 = busy). A cell write starts a programming cycle; the value becomes
/// visible and the busy bit clears `write_latency` cycles later. Writes while
/// busy are answered with device-busy and ignored.
///
/// Internal faults: `slow_response` draws the programming latency uniformly
/// from [latency_ms_min, latency_ms_max]; `corrupt_write` XORs the committed
/// value with `mask`.
class EepromModel : public Device {
 public:
  EepromModel(std::string id, std::uint32_t size, std::uint32_t write_latency_ms,
              std::uint64_t clock_hz, std::uint32_t wait_cycles = 0);

  std::string_view kind() const override { return "eeprom"; }
  Response read(std::uint32_t offset, unsigned width, std::uint64_t now) override;
  Response write(std::uint32_t offset, unsigned width, std::uint32_t value,
                 std::uint64_t now) override;
  std::vector<DeviceEvent> tick(std::uint64_t now) override;
  std::uint32_t peek(std::uint32_t offset, unsigned width) const override;
  bool poke(std::uint32_t offset, unsigned width, std::uint32_t value) override;
  std::vector<std::string> fault_names() const override;
  std::string snapshot() const override;

  std::uint32_t cells() const { return static_cast<std::uint32_t>(cells_.size()); }
  std::uint32_t status_offset() const { return cells(); }
  bool busy() const { return pending_.has_value(); }
  std::uint64_t nominal_latency_cycles() const { return nominal_latency_; }
  /// Programming latency chosen for the most recent accepted write.
  std::uint64_t last_latency_cycles() const { return last_latency_; }

  static constexpr std::uint8_t kErased = 0xFF;

 private:
  struct Pending {
    std::uint32_t cell;
    std::uint8_t value;
    std::uint64_t deadline;
  };
  void advance(std::uint64_t now);

  std::vector<std::uint8_t> cells_;
  std::uint64_t clock_hz_;
  std::uint64_t nominal_latency_;
  std::uint32_t wait_cycles_;
  std::optional<Pending> pending_;
  std::uint64_t last_latency_ = 0;
  std::vector<DeviceEvent> queued_;
};

/// Free-running cycle counter with a one-shot compare.
///
/// Registers (32-bit): 0x0 counter low, 0x4 counter high, 0x8 compare
/// (writing arms it), 0xC status: read bit 0 = interrupt pending, any write
/// acknowledges. Internal fault `missed_compare` suppresses the match.
class TimerModel : public Device {
 public:
  explicit TimerModel(std::string id, std::uint32_t size = 16);

  std::string_view kind() const override { return "timer"; }
  Response read(std::uint32_t offset, unsigned width, std::uint64_t now) override;
  Response write(std::uint32_t offset, unsigned width, std::uint32_t value,
                 std::uint64_t now) override;
  std::vector<DeviceEvent> tick(std::uint64_t now) override;
  std::uint32_t peek(std::uint32_t offset, unsigned width) const override;
  std::vector<std::string> fault_names() const override;
  std::string snapshot() const override;

  std::uint64_t counter() const { return counter_; }
  bool interrupt_pending() const { return pending_; }

 private:
  std::uint64_t counter_ = 0;
  std::uint32_t compare_ = 0;
  bool armed_ = false;
  bool pending_ = false;
  std::vector<DeviceEvent> queued_;
};

/// Transmit-only console. 0x0 transmit (low byte appended to the captured
/// stream), 0x4 status (always 1 = ready). Internal fault `drop_byte`
/// discards the transmitted byte.
class ConsoleModel : public Device {
 public:
  explicit ConsoleModel(std::string id, std::uint32_t size = 8);

  std::string_view kind() const override { return "console"; }
  Response read(std::uint32_t offset, unsigned width, std::uint64_t now) override;
  Response write(std::uint32_t offset, unsigned width, std::uint32_t value,
                 std::uint64_t now) override;
  std::uint32_t peek(std::uint32_t offset, unsigned width) const override;
  std::vector<std::string> fault_names() const override;
  std::string snapshot() const override;

  const std::string& output() const { return output_; }

 private:
  std::string output_;
};

}  // namespace vplat
