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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vplat/bus.hpp"
#include "vplat/cpu.hpp"
#include "vplat/device.hpp"
#include "vplat/fault.hpp"
#include "vplat/platform.hpp"

namespace vplat {

/// One simulation instance: a hart, its interconnect, the devices of a
/// platform and (optionally) the live state of a fault campaign.
/// Single-threaded; distinct instances share nothing.
class Simulator final : public BusPort {
 public:
  /// Throws the validate_platform errors.
  explicit Simulator(PlatformConfig config);
  ~Simulator() override;

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Install a campaign's interposers, device activations and state upsets.
  /// Replaces any previously attached campaign.
  void attach_campaign(const CompiledCampaign& campaign,
                       std::optional<std::uint64_t> seed_override = {});

  /// Tick devices to the current cycle, apply due state upsets, then
  /// execute one instruction.
  StepOutcome step();

  /// Advance all device-local time to the current cycle.
  void tick_devices();

  CpuState& cpu() { return cpu_; }
  const CpuState& cpu() const { return cpu_; }
  const CpuOptions& cpu_options() const { return cpu_options_; }
  const PlatformConfig& config() const { return config_; }
  const MemoryMap& map() const { return map_; }

  Device* device(std::string_view id);
  const Device* device(std::string_view id) const;
  std::span<Device* const> device_table() const { return table_; }

  /// The CPU's port into the interconnect (applies the interposer chain).
  Response access(const Transaction& tx) override;

  /// Side-effect free reads for assertions, traces and debuggers.
  std::optional<std::uint32_t> peek(std::uint32_t address, unsigned width) const;
  /// Debug write bypassing the bus (used by the loader). False if any byte
  /// is unmapped or not backed by storage.
  bool poke(std::uint32_t address, std::span<const std::uint8_t> bytes);

  const std::vector<DeviceEvent>& events() const { return events_; }
  const FaultLog& fault_log() const { return fault_log_; }
  std::uint64_t transaction_count() const { return transactions_; }

  /// Canonical dump of CPU and device state.
  std::string snapshot() const;

 private:
  void apply_state_upsets();

  PlatformConfig config_;
  MemoryMap map_;
  CpuState cpu_;
  CpuOptions cpu_options_;
  std::vector<std::unique_ptr<Device>> devices_;
  std::vector<Device*> table_;

  FaultLog fault_log_;
  std::vector<std::unique_ptr<TransactionFaultInterposer>> interposers_;
  std::vector<Interposer*> chain_;
  struct Upset {
    FaultTarget target;
    std::shared_ptr<FaultActivation> activation;
  };
  std::vector<Upset> upsets_;

  std::vector<DeviceEvent> events_;
  std::uint64_t transactions_ = 0;
};

/// Build a ready-to-step instance from a platform description; the CPU is
/// reset to the entry point.
std::unique_ptr<Simulator> instantiate(const PlatformConfig& config);

}  // namespace vplat
