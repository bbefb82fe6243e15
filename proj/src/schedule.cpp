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

#include "vplat/schedule.hpp"

#include <charconv>
#include <cstdio>
#include <limits>

#include "vplat/error.hpp"

namespace vplat {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t parse_count(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw Error(Errc::kInvalidValue,
                std::string(what) + " expects an integer, got '" +
                    std::string(text) + "'");
  return v;
}

}  // namespace

void validate_schedule(const Schedule& s) {
  if (s.stop && s.start > *s.stop)
    throw Error(Errc::kInvalidFault, "schedule start is after stop");
  if (auto* nth = std::get_if<EveryNthHit>(&s.frequency); nth && nth->n == 0)
    throw Error(Errc::kInvalidFault, "every_nth requires N >= 1");
  if (auto* per = std::get_if<Periodic>(&s.frequency); per && per->period == 0)
    throw Error(Errc::kInvalidFault, "period requires P >= 1");
}

bool should_fire(Schedule& s, std::uint64_t now) {
  if (now < s.start) return false;
  if (s.stop && now >= *s.stop) return false;
  ++s.hits;
  if (std::holds_alternative<EveryHit>(s.frequency)) return true;
  if (auto* nth = std::get_if<EveryNthHit>(&s.frequency))
    return s.hits % nth->n == 0;
  const std::uint64_t period = std::get<Periodic>(s.frequency).period;
  if (now < s.next_due) return false;
  const std::uint64_t window = (now - s.start) / period;
  s.next_due = saturating_add(s.start, saturating_mul(window + 1, period));
  return true;
}

std::string render_frequency(const Frequency& f) {
  if (std::holds_alternative<EveryHit>(f)) return "every";
  if (auto* nth = std::get_if<EveryNthHit>(&f))
    return "every_nth=" + std::to_string(nth->n);
  return "period=" + std::to_string(std::get<Periodic>(f).period);
}

Frequency parse_frequency(std::string_view text) {
  if (text == "every") return EveryHit{};
  constexpr std::string_view kNth = "every_nth=";
  constexpr std::string_view kPeriod = "period=";
  if (text.starts_with(kNth))
    return EveryNthHit{parse_count(text.substr(kNth.size()), "every_nth")};
  if (text.starts_with(kPeriod))
    return Periodic{parse_count(text.substr(kPeriod.size()), "period")};
  throw Error(Errc::kInvalidValue,
              "frequency must be every, every_nth=N or period=P, got '" +
                  std::string(text) + "'");
}

StreamRng::StreamRng(std::uint64_t campaign_seed, std::string_view fault_id,
                     std::uint64_t fault_seed)
    : key_(mix64(mix64(campaign_seed) ^ fnv1a(fault_id)) ^
           mix64(fault_seed + kGolden)) {}

std::uint64_t StreamRng::next() {
  return mix64(key_ + kGolden * ++counter_);
}

std::uint64_t StreamRng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) std::swap(lo, hi);
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return next();  // full 64-bit range
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + x % span;
}

std::string FaultLog::render() const {
  std::string out;
  char buf[64];
  for (const auto& e : entries_) {
    std::snprintf(buf, sizeof buf, "%016llx ",
                  static_cast<unsigned long long>(e.cycle));
    out += buf;
    out += e.fault_id;
    out += ' ';
    out += e.target;
    std::snprintf(buf, sizeof buf, " %llx %llx",
                  static_cast<unsigned long long>(e.pre),
                  static_cast<unsigned long long>(e.post));
    out += buf;
    if (!e.note.empty()) {
      out += ' ';
      out += e.note;
    }
    out += '\n';
  }
  return out;
}

void FaultActivation::record(std::uint64_t cycle, std::uint64_t pre,
                             std::uint64_t post, std::string note) {
  if (log_ != nullptr)
    log_->record({cycle, fault_id_, target_, pre, post, std::move(note)});
}

}  // namespace vplat
