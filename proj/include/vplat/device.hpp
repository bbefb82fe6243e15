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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vplat/bus.hpp"
#include "vplat/schedule.hpp"

namespace vplat {

enum class DeviceEventKind : std::uint8_t {
  kInterruptRaised,
  kInterruptCleared,
  kProgrammingComplete,
};

struct DeviceEvent {
  std::uint64_t cycle = 0;
  std::string device;
  DeviceEventKind kind{};
  std::uint32_t detail = 0;

  friend bool operator==(const DeviceEvent&, const DeviceEvent&) = default;
};

std::string_view event_name(DeviceEventKind kind);

/// Base of every memory-mapped device model.
///
/// Offsets handed to read/write are relative to the device's region and
/// already checked to lie inside it. peek/poke are the debugger's view: they
/// bypass timing, faults and side effects and never count as transactions.
class Device {
 public:
  Device(std::string id, std::uint32_t size) : id_(std::move(id)), size_(size) {}
  virtual ~Device() = default;

  Device(const Device&) = delete;
  Device& operator=(const Device&) = delete;

  const std::string& id() const { return id_; }
  std::uint32_t size() const { return size_; }
  virtual std::string_view kind() const = 0;

  virtual Response handle(const Transaction& tx, std::uint32_t offset);
  virtual Response read(std::uint32_t offset, unsigned width,
                        std::uint64_t now) = 0;
  virtual Response write(std::uint32_t offset, unsigned width,
                         std::uint32_t value, std::uint64_t now) = 0;

  /// Advance device-local time. `now` never decreases between calls.
  virtual std::vector<DeviceEvent> tick(std::uint64_t now);

  virtual std::uint32_t peek(std::uint32_t offset, unsigned width) const = 0;
  /// Returns false if the offset is not backed by storage.
  virtual bool poke(std::uint32_t offset, unsigned width, std::uint32_t value);

  /// Names of internal faulty behaviors this device can embed.
  virtual std::vector<std::string> fault_names() const { return {}; }
  void activate_fault(std::shared_ptr<FaultActivation> activation);
  void clear_faults() { activations_.clear(); }
  const std::vector<std::shared_ptr<FaultActivation>>& activations() const {
    return activations_;
  }

  /// Canonical text dump of all device state; used to prove that
  /// observation does not mutate anything.
  virtual std::string snapshot() const = 0;

 protected:
  /// First active internal fault with this name that fires at `now`.
  FaultActivation* fire(std::string_view name, std::uint64_t now);

 private:
  std::string id_;
  std::uint32_t size_;
  std::vector<std::shared_ptr<FaultActivation>> activations_;
};

}  // namespace vplat
