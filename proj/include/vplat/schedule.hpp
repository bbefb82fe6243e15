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
#include <variant>
#include <vector>

namespace vplat {

struct EveryHit {
  friend bool operator==(const EveryHit&, const EveryHit&) = default;
};
struct EveryNthHit {
  std::uint64_t n = 1;
  friend bool operator==(const EveryNthHit&, const EveryNthHit&) = default;
};
/// At most one firing per `period` cycles, on the first matching event in
/// each window [start + k*period, start + (k+1)*period).
struct Periodic {
  std::uint64_t period = 1;
  friend bool operator==(const Periodic&, const Periodic&) = default;
};
using Frequency = std::variant<EveryHit, EveryNthHit, Periodic>;

/// When a fault is allowed to act. `hits` and `next_due` are per-instance
/// activation state; a freshly parsed schedule has both at zero.
struct Schedule {
  std::uint64_t start = 0;                 // inclusive
  std::optional<std::uint64_t> stop;       // exclusive; nullopt = unbounded
  Frequency frequency = EveryHit{};
  std::uint64_t hits = 0;
  std::uint64_t next_due = 0;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Throws Error(kInvalidFault) if start > stop or N / period is zero.
void validate_schedule(const Schedule& schedule);

/// Call once per matching event with non-decreasing `now`.
bool should_fire(Schedule& schedule, std::uint64_t now);

std::string render_frequency(const Frequency& frequency);
/// Parses `every`, `every_nth=N` or `period=P`.
Frequency parse_frequency(std::string_view text);

/// Counter-based random stream. Draw i is a pure function of (key, i), so
/// streams of different faults never interact.
class StreamRng {
 public:
  StreamRng() = default;
  explicit StreamRng(std::uint64_t key) : key_(key) {}
  StreamRng(std::uint64_t campaign_seed, std::string_view fault_id,
            std::uint64_t fault_seed);

  std::uint64_t next();
  /// Uniform integer over the inclusive range [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

struct FaultParams {
  std::optional<std::uint32_t> mask;
  std::optional<std::uint32_t> value;
  std::optional<std::uint64_t> delay_cycles;
  std::optional<std::uint32_t> latency_ms_min;
  std::optional<std::uint32_t> latency_ms_max;
  std::optional<unsigned> bit;

  friend bool operator==(const FaultParams&, const FaultParams&) = default;
};

struct FaultLogEntry {
  std::uint64_t cycle = 0;
  std::string fault_id;
  std::string target;
  std::uint64_t pre = 0;
  std::uint64_t post = 0;
  std::string note;

  friend bool operator==(const FaultLogEntry&, const FaultLogEntry&) = default;
};

class FaultLog {
 public:
  void record(FaultLogEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<FaultLogEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// One line per activation: `cycle fault-id target pre post [note]`.
  std::string render() const;

 private:
  std::vector<FaultLogEntry> entries_;
};

/// Per-instance live state of one fault: its schedule counters, its random
/// stream and where it reports activations.
class FaultActivation {
 public:
  FaultActivation(std::string fault_id, std::string name, std::string target,
                  FaultParams params, Schedule schedule, StreamRng rng,
                  FaultLog* log)
      : fault_id_(std::move(fault_id)),
        name_(std::move(name)),
        target_(std::move(target)),
        params_(params),
        schedule_(schedule),
        rng_(rng),
        log_(log) {}

  const std::string& fault_id() const { return fault_id_; }
  /// Device-internal behavior name; empty for transaction faults.
  const std::string& name() const { return name_; }
  const std::string& target() const { return target_; }
  const FaultParams& params() const { return params_; }
  const Schedule& schedule() const { return schedule_; }
  StreamRng& rng() { return rng_; }

  bool fire(std::uint64_t now) { return should_fire(schedule_, now); }
  void record(std::uint64_t cycle, std::uint64_t pre, std::uint64_t post,
              std::string note = {});

 private:
  std::string fault_id_;
  std::string name_;
  std::string target_;
  FaultParams params_;
  Schedule schedule_;
  StreamRng rng_;
  FaultLog* log_;
};

}  // namespace vplat
