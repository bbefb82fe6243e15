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

#include "vplat/fault.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "vplat/device.hpp"
#include "vplat/error.hpp"
#include "vplat/kv.hpp"

namespace vplat {

namespace {

constexpr std::string_view kFaultPrefix = "fault.";
constexpr std::string_view kInternalPrefix = "internal:";

std::optional<std::uint64_t> parse_number(std::string_view s) {
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::optional<Access>> parse_kind_suffix(std::string_view s) {
  if (s == "read") return std::optional<Access>(Access::kRead);
  if (s == "write") return std::optional<Access>(Access::kWrite);
  if (s == "any") return std::optional<Access>();
  return std::nullopt;
}

std::string_view kind_suffix(const std::optional<Access>& kind) {
  if (!kind) return "";
  return *kind == Access::kRead ? ":read" : ":write";
}

[[noreturn]] void bad_target(std::string_view text) {
  throw Error(Errc::kInvalidValue, "malformed fault target '" + std::string(text) + "'");
}

FaultType parse_type(const KvEntry& e, std::string& internal_name) {
  static const std::pair<std::string_view, FaultType> kTypes[] = {
      {"bit_flip", FaultType::kBitFlip},
      {"stuck_at_0", FaultType::kStuckAt0},
      {"stuck_at_1", FaultType::kStuckAt1},
      {"value_replace", FaultType::kValueReplace},
      {"extra_delay", FaultType::kExtraDelay},
      {"error_response", FaultType::kErrorResponse},
      {"drop_write", FaultType::kDropWrite},
      {"state_upset", FaultType::kStateUpset},
  };
  for (const auto& [name, type] : kTypes)
    if (e.value == name) return type;
  if (e.value.starts_with(kInternalPrefix) && e.value.size() > kInternalPrefix.size()) {
    internal_name = e.value.substr(kInternalPrefix.size());
    return FaultType::kDeviceInternal;
  }
  throw Error(Errc::kInvalidValue, kv_where(e, "unknown fault type '" + e.value + "'"));
}

std::uint32_t width_mask(unsigned bits) {
  return bits >= 32 ? 0xFFFFFFFFu : (1u << bits) - 1u;
}

}  // namespace

std::string_view fault_type_name(FaultType type) {
  switch (type) {
    case FaultType::kBitFlip: return "bit_flip";
    case FaultType::kStuckAt0: return "stuck_at_0";
    case FaultType::kStuckAt1: return "stuck_at_1";
    case FaultType::kValueReplace: return "value_replace";
    case FaultType::kExtraDelay: return "extra_delay";
    case FaultType::kErrorResponse: return "error_response";
    case FaultType::kDropWrite: return "drop_write";
    case FaultType::kDeviceInternal: return "internal";
    case FaultType::kStateUpset: return "state_upset";
  }
  return "?";
}

bool is_transaction_fault(FaultType type) {
  return type != FaultType::kDeviceInternal && type != FaultType::kStateUpset;
}

FaultTarget parse_target(std::string_view text) {
  if (text.starts_with("reg:")) {
    auto n = parse_number(text.substr(4));
    if (!n) bad_target(text);
    return RegisterLocus{static_cast<unsigned>(std::min<std::uint64_t>(*n, 0xFFFF))};
  }
  if (text.starts_with("mem:")) {
    auto n = parse_number(text.substr(4));
    if (!n || *n > 0xFFFFFFFFull) bad_target(text);
    return MemoryLocus{static_cast<std::uint32_t>(*n)};
  }
  std::string_view head = text;
  std::optional<Access> kind;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    head = text.substr(0, colon);
    auto k = parse_kind_suffix(text.substr(colon + 1));
    if (!k) bad_target(text);
    kind = *k;
  }
  if (head.starts_with("0x") || head.starts_with("0X")) {
    const auto dash = head.find('-');
    if (dash == std::string_view::npos) bad_target(text);
    auto lo = parse_number(head.substr(0, dash));
    auto hi = parse_number(head.substr(dash + 1));
    if (!lo || !hi || *lo > *hi || *hi > 0xFFFFFFFFull) bad_target(text);
    return RangeTarget{static_cast<std::uint32_t>(*lo), static_cast<std::uint32_t>(*hi), kind};
  }
  if (head.empty()) bad_target(text);
  for (char c : head)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      bad_target(text);
  return DeviceTarget{std::string(head), kind};
}

std::string render_target(const FaultTarget& target) {
  if (auto* d = std::get_if<DeviceTarget>(&target))
    return d->device + std::string(kind_suffix(d->kind));
  if (auto* r = std::get_if<RangeTarget>(&target))
    return kv_hex(r->lo) + "-" + kv_hex(r->hi) + std::string(kind_suffix(r->kind));
  if (auto* g = std::get_if<RegisterLocus>(&target))
    return "reg:" + std::to_string(g->index);
  return "mem:" + kv_hex(std::get<MemoryLocus>(target).address);
}

FaultCampaign parse_campaign(std::string_view text) {
  const KvDocument doc = parse_kv(text);
  FaultCampaign campaign;
  bool seen_campaign = false;
  std::set<std::string> ids;

  for (const auto& section : doc.sections) {
    if (section.name == "campaign") {
      if (seen_campaign)
        throw Error(Errc::kSyntaxError, "line " + std::to_string(section.line) +
                                            ": duplicate [campaign] section");
      seen_campaign = true;
      for (const auto& e : section.entries) {
        if (e.key != "seed")
          throw Error(Errc::kUnknownKey, kv_where(e, "not valid in [campaign]"));
        campaign.seed = kv_u64(e);
      }
      continue;
    }
    if (!section.name.starts_with(kFaultPrefix))
      throw Error(Errc::kSyntaxError, "line " + std::to_string(section.line) +
                                          ": unknown section [" + section.name + "]");

    FaultSpec spec;
    spec.id = section.name.substr(kFaultPrefix.size());
    if (spec.id.empty())
      throw Error(Errc::kSyntaxError,
                  "line " + std::to_string(section.line) + ": empty fault id");
    if (!ids.insert(spec.id).second) throw Error(Errc::kDuplicateFaultId, spec.id);

    std::set<std::string> keys;
    bool has_target = false;
    bool has_type = false;
    for (const auto& e : section.entries) {
      if (!keys.insert(e.key).second)
        throw Error(Errc::kSyntaxError, kv_where(e, "duplicate key"));
      if (e.key == "target") {
        spec.target = parse_target(e.value);
        has_target = true;
      } else if (e.key == "type") {
        spec.type = parse_type(e, spec.internal_name);
        has_type = true;
      } else if (e.key == "mask") {
        spec.params.mask = kv_u32(e);
      } else if (e.key == "value") {
        spec.params.value = kv_u32(e);
      } else if (e.key == "delay_cycles") {
        spec.params.delay_cycles = kv_u64(e);
      } else if (e.key == "latency_ms_min") {
        spec.params.latency_ms_min = kv_u32(e);
      } else if (e.key == "latency_ms_max") {
        spec.params.latency_ms_max = kv_u32(e);
      } else if (e.key == "bit") {
        spec.params.bit = static_cast<unsigned>(std::min<std::uint64_t>(kv_u64(e), 0xFFFF));
      } else if (e.key == "start") {
        spec.schedule.start = kv_u64(e);
      } else if (e.key == "stop") {
        if (e.value != "none") spec.schedule.stop = kv_u64(e);
      } else if (e.key == "frequency") {
        spec.schedule.frequency = parse_frequency(e.value);
      } else if (e.key == "seed") {
        spec.seed = kv_u64(e);
      } else if (e.key == "include_fetch") {
        spec.include_fetch = kv_bool(e);
      } else {
        throw Error(Errc::kUnknownKey, kv_where(e, "not valid in a fault section"));
      }
    }
    if (!has_target)
      throw Error(Errc::kMissingField, "target (fault '" + spec.id + "')");
    if (!has_type) throw Error(Errc::kMissingField, "type (fault '" + spec.id + "')");
    validate_schedule(spec.schedule);
    campaign.faults.push_back(std::move(spec));
  }
  return campaign;
}

std::string render_campaign(const FaultCampaign& c) {
  std::string out = "[campaign]\nseed = " + std::to_string(c.seed) + "\n";
  for (const auto& f : c.faults) {
    out += "\n[fault." + f.id + "]\n";
    out += "target = " + render_target(f.target) + "\n";
    out += "type = ";
    out += f.type == FaultType::kDeviceInternal
               ? std::string(kInternalPrefix) + f.internal_name
               : std::string(fault_type_name(f.type));
    out += "\n";
    if (f.params.mask) out += "mask = " + kv_hex(*f.params.mask) + "\n";
    if (f.params.value) out += "value = " + kv_hex(*f.params.value) + "\n";
    if (f.params.delay_cycles)
      out += "delay_cycles = " + std::to_string(*f.params.delay_cycles) + "\n";
    if (f.params.latency_ms_min)
      out += "latency_ms_min = " + std::to_string(*f.params.latency_ms_min) + "\n";
    if (f.params.latency_ms_max)
      out += "latency_ms_max = " + std::to_string(*f.params.latency_ms_max) + "\n";
    if (f.params.bit) out += "bit = " + std::to_string(*f.params.bit) + "\n";
    out += "start = " + std::to_string(f.schedule.start) + "\n";
    out += "stop = " + (f.schedule.stop ? std::to_string(*f.schedule.stop) : "none") + "\n";
    out += "frequency = " + render_frequency(f.schedule.frequency) + "\n";
    out += "seed = " + std::to_string(f.seed) + "\n";
    if (f.include_fetch) out += "include_fetch = true\n";
  }
  return out;
}

bool TransactionFilter::matches(const Transaction& tx) const {
  if (tx.fetch && !include_fetch) return false;
  if (kind && tx.kind != *kind) return false;
  return tx.address >= lo && tx.address <= hi;
}

CompiledCampaign compile_campaign(const FaultCampaign& campaign,
                                  const PlatformConfig& platform) {
  CompiledCampaign out;
  out.seed = campaign.seed;
  std::set<std::string> ids;

  for (const auto& spec : campaign.faults) {
    if (!ids.insert(spec.id).second) throw Error(Errc::kDuplicateFaultId, spec.id);
    validate_schedule(spec.schedule);
    CompiledFault cf{spec, render_target(spec.target), {}};
    const std::string who = "fault '" + spec.id + "': ";

    if (is_transaction_fault(spec.type)) {
      std::optional<Access> kind;
      if (auto* d = std::get_if<DeviceTarget>(&spec.target)) {
        const DeviceConfig* dev = platform.find(d->device);
        if (dev == nullptr) throw Error(Errc::kUnknownTarget, d->device);
        cf.filter.lo = dev->base;
        cf.filter.hi = static_cast<std::uint32_t>(std::uint64_t{dev->base} + dev->size - 1);
        kind = d->kind;
      } else if (auto* r = std::get_if<RangeTarget>(&spec.target)) {
        cf.filter.lo = r->lo;
        cf.filter.hi = r->hi;
        kind = r->kind;
      } else {
        throw Error(Errc::kInvalidFault, who + "transaction faults need a device or address-range target");
      }
      cf.filter.kind = kind;
      cf.filter.include_fetch = spec.include_fetch;

      switch (spec.type) {
        case FaultType::kStuckAt0:
        case FaultType::kStuckAt1:
          if (!spec.params.mask) throw Error(Errc::kInvalidFault, who + "stuck-at needs mask");
          break;
        case FaultType::kValueReplace:
          if (!spec.params.value) throw Error(Errc::kInvalidFault, who + "value_replace needs value");
          break;
        case FaultType::kExtraDelay:
          if (!spec.params.delay_cycles)
            throw Error(Errc::kInvalidFault, who + "extra_delay needs delay_cycles");
          break;
        case FaultType::kDropWrite:
          if (kind == Access::kRead)
            throw Error(Errc::kInvalidFault, who + "drop_write cannot target reads");
          break;
        default:
          break;
      }
      out.interposers.push_back(std::move(cf));
    } else if (spec.type == FaultType::kDeviceInternal) {
      auto* d = std::get_if<DeviceTarget>(&spec.target);
      if (d == nullptr || d->kind)
        throw Error(Errc::kInvalidFault, who + "device-internal faults target a device id");
      const DeviceConfig* dev = platform.find(d->device);
      if (dev == nullptr) throw Error(Errc::kUnknownTarget, d->device);
      const auto names = device_fault_names(dev->kind);
      if (std::find(names.begin(), names.end(), spec.internal_name) == names.end())
        throw Error(Errc::kUnknownDeviceFault, d->device + ": " + spec.internal_name);
      if (spec.internal_name == "slow_response") {
        const auto& p = spec.params;
        if (!p.latency_ms_min || !p.latency_ms_max || *p.latency_ms_min > *p.latency_ms_max)
          throw Error(Errc::kInvalidFault,
                      who + "slow_response needs latency_ms_min <= latency_ms_max");
      }
      out.activations.push_back(std::move(cf));
    } else {
      if (spec.params.bit && *spec.params.bit > 31)
        throw Error(Errc::kInvalidLocus, who + "bit index must be 0..31");
      if (auto* reg = std::get_if<RegisterLocus>(&spec.target)) {
        if (reg->index >= kNumRegs)
          throw Error(Errc::kInvalidLocus, who + "register index must be 0..31");
      } else if (auto* mem = std::get_if<MemoryLocus>(&spec.target)) {
        if (mem->address % 4 != 0)
          throw Error(Errc::kInvalidLocus, who + "memory locus must be word aligned");
        bool backed = false;
        for (const auto& dev : platform.devices) {
          if ((dev.kind == DeviceKind::kRam || dev.kind == DeviceKind::kRom ||
               dev.kind == DeviceKind::kEeprom) &&
              mem->address >= dev.base &&
              std::uint64_t{mem->address} + 4 <=
                  std::uint64_t{dev.base} + dev.size -
                      (dev.kind == DeviceKind::kEeprom ? 4 : 0))
            backed = true;
        }
        if (!backed) throw Error(Errc::kInvalidLocus, who + "memory locus is not backed storage");
      } else {
        throw Error(Errc::kInvalidLocus, who + "state upsets target reg:N or mem:ADDR");
      }
      out.state_upsets.push_back(std::move(cf));
    }
  }
  return out;
}

Alteration apply_fault(std::uint32_t value, FaultType type,
                       const FaultParams& params, StreamRng& rng,
                       unsigned width_bits) {
  Alteration a;
  a.value = value;
  switch (type) {
    case FaultType::kBitFlip: {
      std::uint32_t mask;
      if (params.mask)
        mask = *params.mask;
      else
        mask = 1u << rng.uniform(0, std::max(1u, width_bits) - 1);
      a.value = value ^ mask;
      break;
    }
    case FaultType::kStuckAt0: a.value = value & ~params.mask.value_or(0); break;
    case FaultType::kStuckAt1: a.value = value | params.mask.value_or(0); break;
    case FaultType::kValueReplace: a.value = params.value.value_or(value); break;
    case FaultType::kExtraDelay: a.added_latency = params.delay_cycles.value_or(0); break;
    case FaultType::kErrorResponse: a.error = true; break;
    case FaultType::kDropWrite: a.drop = true; break;
    default: break;
  }
  a.value &= width_mask(width_bits);
  return a;
}

TransactionFaultInterposer::TransactionFaultInterposer(
    const CompiledFault& fault, std::shared_ptr<FaultActivation> activation)
    : type_(fault.spec.type), filter_(fault.filter), activation_(std::move(activation)) {}

bool TransactionFaultInterposer::engage(const Transaction& tx) {
  return filter_.matches(tx) && activation_->fire(tx.issue_cycle);
}

void TransactionFaultInterposer::outbound(Transaction& tx, Disposition& disposition) {
  const std::uint64_t now = tx.issue_cycle;
  switch (type_) {
    case FaultType::kErrorResponse:
      disposition = Disposition::kError;
      activation_->record(now, tx.payload, 0, "error-response");
      return;
    case FaultType::kDropWrite:
      if (tx.kind != Access::kWrite) return;
      if (disposition == Disposition::kForward) disposition = Disposition::kDrop;
      activation_->record(now, tx.payload, 0, "dropped");
      return;
    case FaultType::kExtraDelay:
      return;
    default:
      break;
  }
  if (tx.kind != Access::kWrite) return;
  const Alteration a = apply_fault(tx.payload, type_, activation_->params(),
                                   activation_->rng(), 8u * tx.width);
  activation_->record(now, tx.payload, a.value);
  tx.payload = a.value;
}

void TransactionFaultInterposer::inbound(const Transaction& tx, Response& response) {
  const std::uint64_t now = tx.issue_cycle;
  if (type_ == FaultType::kExtraDelay) {
    const auto before = response.latency;
    response.latency += activation_->params().delay_cycles.value_or(0);
    activation_->record(now, before, response.latency, "latency");
    return;
  }
  if (type_ == FaultType::kErrorResponse || type_ == FaultType::kDropWrite) return;
  if (tx.kind != Access::kRead || response.status != Status::kOk) return;
  const Alteration a = apply_fault(response.payload, type_, activation_->params(),
                                   activation_->rng(), 8u * tx.width);
  activation_->record(now, response.payload, a.value);
  response.payload = a.value;
}

UpsetResult inject_state_upset(CpuState& state, unsigned reg, unsigned bit) {
  if (reg >= kNumRegs || bit > 31)
    throw Error(Errc::kInvalidLocus, "reg " + std::to_string(reg) + " bit " + std::to_string(bit));
  UpsetResult r;
  r.pre = state.reg(reg);
  state.set_reg(reg, r.pre ^ (1u << bit));
  r.post = state.reg(reg);
  r.suppressed = reg == 0;
  return r;
}

UpsetResult inject_state_upset(Device& device, std::uint32_t offset, unsigned bit) {
  if (bit > 31 || offset % 4 != 0 || std::uint64_t{offset} + 4 > device.size())
    throw Error(Errc::kInvalidLocus, device.id() + " offset " + kv_hex(offset));
  UpsetResult r;
  r.pre = device.peek(offset, 4);
  if (!device.poke(offset, 4, r.pre ^ (1u << bit)))
    throw Error(Errc::kInvalidLocus, device.id() + " offset " + kv_hex(offset) + " is not storage");
  r.post = device.peek(offset, 4);
  return r;
}

}  // namespace vplat
