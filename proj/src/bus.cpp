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

#include "vplat/bus.hpp"

#include <algorithm>
#include <cstdio>

#include "vplat/device.hpp"
#include "vplat/error.hpp"

namespace vplat {

namespace {

std::string describe(const Region& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[0x%08x,+0x%x)", r.base, r.size);
  return r.device + buf;
}

}  // namespace

bool is_well_formed(const Transaction& tx) {
  if (tx.width != 1 && tx.width != 2 && tx.width != 4) return false;
  if (tx.address % tx.width != 0) return false;
  return std::uint64_t{tx.address} + tx.width - 1 <= 0xFFFFFFFFull;
}

const Region* MemoryMap::find(std::uint32_t address) const {
  auto it = std::upper_bound(
      regions_.begin(), regions_.end(), address,
      [](std::uint32_t a, const Region& r) { return a < r.base; });
  if (it == regions_.begin()) return nullptr;
  --it;
  return it->contains(address) ? &*it : nullptr;
}

const Region* MemoryMap::find_device(const std::string& id) const {
  for (const auto& r : regions_)
    if (r.device == id) return &r;
  return nullptr;
}

MemoryMap validate_map(std::vector<Region> regions) {
  for (const auto& r : regions) {
    if (r.base % 4 != 0 || r.size % 4 != 0 || r.size == 0 ||
        r.end() > 0x1'0000'0000ull)
      throw Error(Errc::kMisalignedRegion, describe(r));
  }
  std::stable_sort(regions.begin(), regions.end(),
                   [](const Region& a, const Region& b) { return a.base < b.base; });
  for (std::size_t i = 1; i < regions.size(); ++i) {
    if (regions[i].base < regions[i - 1].end())
      throw Error(Errc::kOverlappingRegions,
                  describe(regions[i - 1]) + " and " + describe(regions[i]));
  }
  MemoryMap map;
  map.regions_ = std::move(regions);
  return map;
}

Response route(Transaction tx, const MemoryMap& map,
               std::span<Device* const> devices,
               std::span<Interposer* const> chain) {
  if (!is_well_formed(tx)) return Response::bus_error();

  // Engagement is decided once per transaction so hit counters advance
  // exactly once per matching event.
  std::vector<char> engaged(chain.size(), 0);

  Disposition disposition = Disposition::kForward;
  const Transaction issued = tx;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    engaged[i] = chain[i]->engage(issued);
    if (engaged[i]) chain[i]->outbound(tx, disposition);
  }

  Response response;
  switch (disposition) {
    case Disposition::kDrop:
      response = Response::ok();
      break;
    case Disposition::kError:
      response = Response::bus_error();
      break;
    case Disposition::kForward: {
      const Region* region = map.find(tx.address);
      if (region == nullptr ||
          std::uint64_t{tx.address} + tx.width > region->end() ||
          region->device_index >= devices.size() ||
          devices[region->device_index] == nullptr) {
        response = Response::bus_error();
        break;
      }
      response = devices[region->device_index]->handle(tx, tx.address - region->base);
      if (response.status == Status::kBusError || tx.kind == Access::kWrite)
        response.payload = 0;
      break;
    }
  }

  for (std::size_t i = 0; i < chain.size(); ++i)
    if (engaged[i]) chain[i]->inbound(issued, response);
  return response;
}

}  // namespace vplat
