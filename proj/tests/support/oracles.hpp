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

// Brute-force reference models used by property tests and the acceptance
// checks.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace rvtest {

struct RefSchedule {
  std::uint64_t start = 0;
  std::optional<std::uint64_t> stop;
  int mode = 0;  // 0 every, 1 every nth, 2 periodic
  std::uint64_t param = 1;
};

/// Indices (into `events`, sorted ascending) of the events that fire.
/// Counts in-window events from one and groups periodic windows by
/// division, without carrying any incremental state.
inline std::set<std::size_t> reference_firings(const RefSchedule& s,
                                               const std::vector<std::uint64_t>& events) {
  std::set<std::size_t> fired;
  std::uint64_t k = 0;
  std::set<std::uint64_t> windows_used;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto t = events[i];
    const bool in_window = t >= s.start && (!s.stop || t < *s.stop);
    if (!in_window) continue;
    ++k;
    switch (s.mode) {
      case 0: fired.insert(i); break;
      case 1:
        if (k % s.param == 0) fired.insert(i);
        break;
      default:
        if (windows_used.insert((t - s.start) / s.param).second) fired.insert(i);
        break;
    }
  }
  return fired;
}

/// Bitwise oracle for the value faults: decides every output bit on its own.
inline std::uint32_t reference_value_fault(int type, std::uint32_t v, std::uint32_t p) {
  std::uint32_t out = 0;
  for (unsigned b = 0; b < 32; ++b) {
    const bool in = (v >> b) & 1, m = (p >> b) & 1;
    bool o = in;
    switch (type) {
      case 0: o = m ? !in : in; break;   // bit flip
      case 1: o = m ? false : in; break; // stuck at 0
      case 2: o = m ? true : in; break;  // stuck at 1
      default: o = (p >> b) & 1; break;  // replace
    }
    if (o) out |= 1u << b;
  }
  return out;
}

}  // namespace rvtest
