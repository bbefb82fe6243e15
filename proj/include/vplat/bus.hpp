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
#include <span>
#include <string>
#include <vector>

namespace vplat {

class Device;

enum class Access : std::uint8_t { kRead, kWrite };

/// One bus access issued by an initiator.
struct Transaction {
  Access kind = Access::kRead;
  std::uint32_t address = 0;
  std::uint8_t width = 4;      // 1, 2 or 4
  std::uint32_t payload = 0;   // writes only
  std::uint32_t initiator = 0; // see kInitiator* below
  std::uint64_t issue_cycle = 0;
  bool fetch = false;          // instruction fetch (reads only)

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

inline constexpr std::uint32_t kInitiatorCpu = 0;
inline constexpr std::uint32_t kInitiatorStimulus = 1;

/// Width in {1,2,4}, width-aligned, and no 32-bit wrap.
bool is_well_formed(const Transaction& tx);

enum class Status : std::uint8_t { kOk, kBusError, kDeviceBusy };

struct Response {
  Status status = Status::kOk;
  std::uint32_t payload = 0;  // reads only; zero on bus-error
  std::uint64_t latency = 0;  // wait cycles charged to the initiator

  static Response ok(std::uint32_t payload = 0, std::uint64_t latency = 0) {
    return {Status::kOk, payload, latency};
  }
  static Response bus_error() { return {Status::kBusError, 0, 0}; }
  static Response busy(std::uint64_t latency = 0) {
    return {Status::kDeviceBusy, 0, latency};
  }

  friend bool operator==(const Response&, const Response&) = default;
};

struct Region {
  std::uint32_t base = 0;
  std::uint32_t size = 0;
  std::string device;           // instance id
  std::size_t device_index = 0; // index into the owning device table

  std::uint64_t end() const { return std::uint64_t{base} + size; }
  bool contains(std::uint32_t addr) const {
    return addr >= base && addr < end();
  }

  friend bool operator==(const Region&, const Region&) = default;
};

/// Validated, address-sorted region list. Only obtainable through
/// validate_map, so holding one implies the invariants hold.
class MemoryMap {
 public:
  MemoryMap() = default;

  const std::vector<Region>& regions() const { return regions_; }
  const Region* find(std::uint32_t address) const;
  const Region* find_device(const std::string& id) const;

 private:
  friend MemoryMap validate_map(std::vector<Region> regions);
  std::vector<Region> regions_;
};

/// Throws Error(kOverlappingRegions) or Error(kMisalignedRegion).
MemoryMap validate_map(std::vector<Region> regions);

/// What the outbound interposer pass decided for a transaction.
enum class Disposition : std::uint8_t { kForward, kDrop, kError };

/// A transaction-level fault stage. route() asks every interposer in chain
/// order whether it engages on a transaction (this is where schedules and hit
/// counters advance), then applies outbound edits in order, dispatches to the
/// device, and applies inbound edits in the same order.
class Interposer {
 public:
  virtual ~Interposer() = default;
  virtual bool engage(const Transaction& tx) = 0;
  virtual void outbound(Transaction& tx, Disposition& disposition) = 0;
  virtual void inbound(const Transaction& tx, Response& response) = 0;
};

/// Route one well-formed transaction. Never throws for unmapped or
/// region-spanning accesses; those come back as bus-error.
Response route(Transaction tx, const MemoryMap& map,
               std::span<Device* const> devices,
               std::span<Interposer* const> chain = {});

/// What the CPU sees of the platform.
class BusPort {
 public:
  virtual ~BusPort() = default;
  virtual Response access(const Transaction& tx) = 0;
};

}  // namespace vplat
