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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vplat/bus.hpp"
#include "vplat/cpu.hpp"
#include "vplat/platform.hpp"
#include "vplat/schedule.hpp"

namespace vplat {

enum class FaultType : std::uint8_t {
  kBitFlip,
  kStuckAt0,
  kStuckAt1,
  kValueReplace,
  kExtraDelay,
  kErrorResponse,
  kDropWrite,
  kDeviceInternal,
  kStateUpset,
};

std::string_view fault_type_name(FaultType type);
bool is_transaction_fault(FaultType type);

// Target forms, as written in a campaign file:
//   eeprom0            a device (device-internal faults, or all its transactions)
//   ram0:read          a device's reads (also :write, :any)
//   0x8000-0x80ff:write  an inclusive address range
//   reg:5              a CPU register (state upsets)
//   mem:0x80000000     a memory word (state upsets)
struct DeviceTarget {
  std::string device;
  std::optional<Access> kind;
  friend bool operator==(const DeviceTarget&, const DeviceTarget&) = default;
};
struct RangeTarget {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;  // inclusive
  std::optional<Access> kind;
  friend bool operator==(const RangeTarget&, const RangeTarget&) = default;
};
struct RegisterLocus {
  unsigned index = 0;
  friend bool operator==(const RegisterLocus&, const RegisterLocus&) = default;
};
struct MemoryLocus {
  std::uint32_t address = 0;
  friend bool operator==(const MemoryLocus&, const MemoryLocus&) = default;
};
using FaultTarget = std::variant<DeviceTarget, RangeTarget, RegisterLocus, MemoryLocus>;

FaultTarget parse_target(std::string_view text);
std::string render_target(const FaultTarget& target);

struct FaultSpec {
  std::string id;
  FaultTarget target;
  FaultType type = FaultType::kBitFlip;
  std::string internal_name;  // device-internal faults only
  FaultParams params;
  Schedule schedule;
  std::uint64_t seed = 0;
  bool include_fetch = false;

  friend bool operator==(const FaultSpec&, const FaultSpec&) = default;
};

struct FaultCampaign {
  std::uint64_t seed = 0;
  std::vector<FaultSpec> faults;
};

/// Parse a campaign file: an optional [campaign] section (key: seed) and one
/// [fault.<id>] section per fault in application order.
FaultCampaign parse_campaign(std::string_view text);
std::string render_campaign(const FaultCampaign& campaign);

/// Which transactions a transaction fault considers.
struct TransactionFilter {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0xFFFFFFFF;  // inclusive
  std::optional<Access> kind;
  bool include_fetch = false;

  bool matches(const Transaction& tx) const;
};

struct CompiledFault {
  FaultSpec spec;
  std::string label;          // target as written, for logs
  TransactionFilter filter;   // transaction faults only
};

/// Immutable result of compiling a campaign against a platform. Shareable
/// across simulation instances; live state is created per instance.
struct CompiledCampaign {
  std::uint64_t seed = 0;
  std::vector<CompiledFault> interposers;   // campaign order
  std::vector<CompiledFault> activations;   // device-internal, campaign order
  std::vector<CompiledFault> state_upsets;  // campaign order

  bool empty() const {
    return interposers.empty() && activations.empty() && state_upsets.empty();
  }
};

/// Throws Error with kDuplicateFaultId, kUnknownTarget, kUnknownDeviceFault,
/// kInvalidLocus or kInvalidFault.
CompiledCampaign compile_campaign(const FaultCampaign& campaign,
                                  const PlatformConfig& platform);

/// Effect of one transaction fault on a value or response.
struct Alteration {
  std::uint32_t value = 0;
  std::uint64_t added_latency = 0;
  bool error = false;
  bool drop = false;
};

/// bit-flip: v ^ mask; stuck-at-0: v & ~mask; stuck-at-1: v | mask;
/// value-replace: params.value; extra-delay adds delay_cycles; error-response
/// and drop-write set the corresponding flag. A bit-flip without a mask
/// flips one bit drawn from `rng` among the low `width_bits` bits.
Alteration apply_fault(std::uint32_t value, FaultType type,
                       const FaultParams& params, StreamRng& rng,
                       unsigned width_bits = 32);

/// A transaction fault living in a route() interposer chain.
class TransactionFaultInterposer : public Interposer {
 public:
  TransactionFaultInterposer(const CompiledFault& fault,
                             std::shared_ptr<FaultActivation> activation);

  bool engage(const Transaction& tx) override;
  void outbound(Transaction& tx, Disposition& disposition) override;
  void inbound(const Transaction& tx, Response& response) override;

  const FaultActivation& activation() const { return *activation_; }

 private:
  FaultType type_;
  TransactionFilter filter_;
  std::shared_ptr<FaultActivation> activation_;
};

struct UpsetResult {
  std::uint32_t pre = 0;
  std::uint32_t post = 0;
  bool suppressed = false;
};

/// Invert one bit of a register. Register 0 stays zero and the result is
/// marked suppressed. Throws Error(kInvalidLocus) for index > 31 or bit > 31.
UpsetResult inject_state_upset(CpuState& state, unsigned reg, unsigned bit);

/// Invert one bit of the 32-bit word at `offset` in a device's storage,
/// bypassing the bus. Throws Error(kInvalidLocus) if the word is not backed.
UpsetResult inject_state_upset(Device& device, std::uint32_t offset, unsigned bit);

}  // namespace vplat
