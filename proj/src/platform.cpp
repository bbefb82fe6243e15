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

#include "vplat/platform.hpp"

#include <set>

#include "vplat/error.hpp"
#include "vplat/kv.hpp"

namespace vplat {

namespace {

constexpr std::string_view kDevicePrefix = "device.";

std::uint32_t min_size(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::kEeprom: return 8;
    case DeviceKind::kTimer: return 16;
    case DeviceKind::kConsole: return 8;
    default: return 4;
  }
}

bool kind_has_key(DeviceKind kind, std::string_view key) {
  if (key == "kind" || key == "base" || key == "size") return true;
  if (key == "wait_cycles")
    return kind == DeviceKind::kRom || kind == DeviceKind::kRam ||
           kind == DeviceKind::kEeprom;
  if (key == "write_latency_ms") return kind == DeviceKind::kEeprom;
  return false;
}

[[noreturn]] void unknown_key(const KvEntry& e, std::string_view section) {
  throw Error(Errc::kUnknownKey,
              kv_where(e, "not valid in [" + std::string(section) + "]"));
}

/// Rejects repeated keys; returns a lookup over the section.
class KeySet {
 public:
  explicit KeySet(const KvSection& s) : section_(s) {
    std::set<std::string> seen;
    for (const auto& e : s.entries)
      if (!seen.insert(e.key).second)
        throw Error(Errc::kSyntaxError, kv_where(e, "duplicate key"));
  }
  const KvEntry* get(std::string_view key) const {
    for (const auto& e : section_.entries)
      if (e.key == key) return &e;
    return nullptr;
  }
  const KvEntry& require(std::string_view key) const {
    if (const KvEntry* e = get(key)) return *e;
    throw Error(Errc::kMissingField,
                std::string(key) + " (section [" + section_.name + "] at line " +
                    std::to_string(section_.line) + ")");
  }

 private:
  const KvSection& section_;
};

DeviceConfig parse_device(const KvSection& section) {
  const std::string id = section.name.substr(kDevicePrefix.size());
  if (id.empty() || id.find('.') != std::string::npos)
    throw Error(Errc::kSyntaxError, "line " + std::to_string(section.line) +
                                        ": bad device section name");
  KeySet keys(section);
  const KvEntry& kind_entry = keys.require("kind");
  const auto kind = parse_kind(kind_entry.value);
  if (!kind)
    throw Error(Errc::kUnknownDeviceKind, kv_where(kind_entry, kind_entry.value));

  for (const auto& e : section.entries)
    if (!kind_has_key(*kind, e.key)) unknown_key(e, section.name);

  DeviceConfig d;
  d.id = id;
  d.kind = *kind;
  d.base = kv_u32(keys.require("base"));
  if (const KvEntry* size = keys.get("size")) {
    d.size = kv_u32(*size);
    if (d.size < min_size(d.kind))
      throw Error(Errc::kInvalidValue,
                  kv_where(*size, "too small for a " + std::string(kind_name(d.kind))));
  } else if (d.kind == DeviceKind::kTimer || d.kind == DeviceKind::kConsole) {
    d.size = min_size(d.kind);
  } else {
    keys.require("size");
  }
  if (const KvEntry* w = keys.get("wait_cycles")) d.wait_cycles = kv_u32(*w);
  if (const KvEntry* l = keys.get("write_latency_ms")) d.write_latency_ms = kv_u32(*l);
  return d;
}

}  // namespace

const DeviceConfig* PlatformConfig::find(std::string_view id) const {
  for (const auto& d : devices)
    if (d.id == id) return &d;
  return nullptr;
}

PlatformConfig parse_platform(std::string_view text) {
  const KvDocument doc = parse_kv(text);
  PlatformConfig config;
  const KvSection* platform = nullptr;
  std::set<std::string> ids;

  for (const auto& section : doc.sections) {
    if (section.name == "platform") {
      if (platform != nullptr)
        throw Error(Errc::kSyntaxError, "line " + std::to_string(section.line) +
                                            ": duplicate [platform] section");
      platform = &section;
    } else if (section.name.starts_with(kDevicePrefix)) {
      DeviceConfig d = parse_device(section);
      if (!ids.insert(d.id).second)
        throw Error(Errc::kDuplicateId, "line " + std::to_string(section.line) +
                                            ": device '" + d.id + "'");
      config.devices.push_back(std::move(d));
    } else {
      throw Error(Errc::kSyntaxError, "line " + std::to_string(section.line) +
                                          ": unknown section [" + section.name + "]");
    }
  }
  if (platform == nullptr) throw Error(Errc::kMissingField, "[platform] section");

  KeySet keys(*platform);
  for (const auto& e : platform->entries) {
    if (e.key != "name" && e.key != "clock_hz" && e.key != "entry_point" &&
        e.key != "test_exit_address")
      unknown_key(e, "platform");
  }
  if (const KvEntry* n = keys.get("name")) config.name = n->value;
  if (const KvEntry* c = keys.get("clock_hz")) {
    config.clock_hz = kv_u64(*c);
    if (config.clock_hz < 1000)
      throw Error(Errc::kInvalidValue, kv_where(*c, "clock_hz must be >= 1000"));
  }
  config.entry_point = kv_u32(keys.require("entry_point"));
  if (const KvEntry* t = keys.get("test_exit_address"))
    config.test_exit_address = kv_u32(*t);
  return config;
}

std::string render_platform(const PlatformConfig& c) {
  std::string out = "[platform]\n";
  out += "name = " + kv_quote(c.name) + "\n";
  out += "clock_hz = " + std::to_string(c.clock_hz) + "\n";
  out += "entry_point = " + kv_hex(c.entry_point) + "\n";
  if (c.test_exit_address)
    out += "test_exit_address = " + kv_hex(*c.test_exit_address) + "\n";
  for (const auto& d : c.devices) {
    out += "\n[device." + d.id + "]\n";
    out += "kind = " + std::string(kind_name(d.kind)) + "\n";
    out += "base = " + kv_hex(d.base) + "\n";
    out += "size = " + kv_hex(d.size) + "\n";
    if (kind_has_key(d.kind, "wait_cycles"))
      out += "wait_cycles = " + std::to_string(d.wait_cycles) + "\n";
    if (kind_has_key(d.kind, "write_latency_ms"))
      out += "write_latency_ms = " + std::to_string(d.write_latency_ms) + "\n";
  }
  return out;
}

MemoryMap validate_platform(const PlatformConfig& config) {
  if (config.clock_hz < 1000)
    throw Error(Errc::kInvalidValue, "clock_hz must be >= 1000");
  std::set<std::string> ids;
  std::vector<Region> regions;
  for (std::size_t i = 0; i < config.devices.size(); ++i) {
    const auto& d = config.devices[i];
    if (!ids.insert(d.id).second) throw Error(Errc::kDuplicateId, d.id);
    regions.push_back({d.base, d.size, d.id, i});
  }
  MemoryMap map = validate_map(std::move(regions));
  if (map.find(config.entry_point) == nullptr)
    throw Error(Errc::kEntryOutsideMap, kv_hex(config.entry_point));
  return map;
}

}  // namespace vplat
