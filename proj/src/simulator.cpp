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

#include "vplat/simulator.hpp"

#include "vplat/devices.hpp"
#include "vplat/error.hpp"
#include "vplat/kv.hpp"

namespace vplat {

namespace {

std::unique_ptr<Device> make_device(const DeviceConfig& d, std::uint64_t clock_hz) {
  switch (d.kind) {
    case DeviceKind::kRom:
      return std::make_unique<MemoryDevice>(d.id, d.size, false, d.wait_cycles);
    case DeviceKind::kRam:
      return std::make_unique<MemoryDevice>(d.id, d.size, true, d.wait_cycles);
    case DeviceKind::kEeprom:
      return std::make_unique<EepromModel>(d.id, d.size, d.write_latency_ms,
                                           clock_hz, d.wait_cycles);
    case DeviceKind::kTimer:
      return std::make_unique<TimerModel>(d.id, d.size);
    case DeviceKind::kConsole:
      return std::make_unique<ConsoleModel>(d.id, d.size);
  }
  return nullptr;
}

}  // namespace

Simulator::Simulator(PlatformConfig config)
    : config_(std::move(config)), map_(validate_platform(config_)) {
  for (const auto& d : config_.devices) {
    devices_.push_back(make_device(d, config_.clock_hz));
    table_.push_back(devices_.back().get());
  }
  cpu_ = reset(config_.entry_point);
  cpu_options_.test_exit_address = config_.test_exit_address;
}

Simulator::~Simulator() = default;

void Simulator::attach_campaign(const CompiledCampaign& campaign,
                                std::optional<std::uint64_t> seed_override) {
  const std::uint64_t seed = seed_override.value_or(campaign.seed);
  interposers_.clear();
  chain_.clear();
  upsets_.clear();
  for (auto& d : devices_) d->clear_faults();

  auto make_activation = [&](const CompiledFault& f) {
    return std::make_shared<FaultActivation>(
        f.spec.id, f.spec.internal_name, f.label, f.spec.params, f.spec.schedule,
        StreamRng(seed, f.spec.id, f.spec.seed), &fault_log_);
  };

  for (const auto& f : campaign.interposers) {
    interposers_.push_back(
        std::make_unique<TransactionFaultInterposer>(f, make_activation(f)));
    chain_.push_back(interposers_.back().get());
  }
  for (const auto& f : campaign.activations) {
    const auto& target = std::get<DeviceTarget>(f.spec.target);
    Device* dev = device(target.device);
    if (dev == nullptr) throw Error(Errc::kUnknownTarget, target.device);
    dev->activate_fault(make_activation(f));
  }
  for (const auto& f : campaign.state_upsets)
    upsets_.push_back({f.spec.target, make_activation(f)});
}

Device* Simulator::device(std::string_view id) {
  for (auto& d : devices_)
    if (d->id() == id) return d.get();
  return nullptr;
}

const Device* Simulator::device(std::string_view id) const {
  for (const auto& d : devices_)
    if (d->id() == id) return d.get();
  return nullptr;
}

Response Simulator::access(const Transaction& tx) {
  ++transactions_;
  return route(tx, map_, table_, chain_);
}

void Simulator::tick_devices() {
  for (auto& d : devices_) {
    auto evs = d->tick(cpu_.cycles);
    events_.insert(events_.end(), evs.begin(), evs.end());
  }
}

void Simulator::apply_state_upsets() {
  for (auto& u : upsets_) {
    if (!u.activation->fire(cpu_.cycles)) continue;
    const auto& p = u.activation->params();
    const unsigned bit =
        p.bit ? *p.bit : static_cast<unsigned>(u.activation->rng().uniform(0, 31));
    if (auto* reg = std::get_if<RegisterLocus>(&u.target)) {
      const UpsetResult r = inject_state_upset(cpu_, reg->index, bit);
      u.activation->record(cpu_.cycles, r.pre, r.post,
                           r.suppressed ? "suppressed" : "bit=" + std::to_string(bit));
    } else if (auto* mem = std::get_if<MemoryLocus>(&u.target)) {
      const Region* region = map_.find(mem->address);
      if (region == nullptr) throw Error(Errc::kInvalidLocus, kv_hex(mem->address));
      const UpsetResult r = inject_state_upset(*table_[region->device_index],
                                               mem->address - region->base, bit);
      u.activation->record(cpu_.cycles, r.pre, r.post, "bit=" + std::to_string(bit));
    }
  }
}

StepOutcome Simulator::step() {
  if (!cpu_.halted) {
    tick_devices();
    apply_state_upsets();
  }
  return vplat::step(cpu_, *this, cpu_options_);
}

std::optional<std::uint32_t> Simulator::peek(std::uint32_t address,
                                             unsigned width) const {
  const Region* region = map_.find(address);
  if (region == nullptr || std::uint64_t{address} + width > region->end())
    return std::nullopt;
  return table_[region->device_index]->peek(address - region->base, width);
}

bool Simulator::poke(std::uint32_t address, std::span<const std::uint8_t> bytes) {
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const std::uint64_t at = std::uint64_t{address} + i;
    if (at > 0xFFFFFFFFull) return false;
    const Region* region = map_.find(static_cast<std::uint32_t>(at));
    if (region == nullptr) return false;
    if (!table_[region->device_index]->poke(
            static_cast<std::uint32_t>(at - region->base), 1, bytes[i]))
      return false;
  }
  return true;
}

std::string Simulator::snapshot() const {
  std::string out = "pc=" + kv_hex(cpu_.pc) + " cycles=" + std::to_string(cpu_.cycles);
  for (std::size_t i = 0; i < kNumRegs; ++i) out += " " + kv_hex(cpu_.reg(i));
  out += '\n';
  for (const auto& d : devices_) out += d->snapshot() + '\n';
  return out;
}

std::unique_ptr<Simulator> instantiate(const PlatformConfig& config) {
  return std::make_unique<Simulator>(config);
}

}  // namespace vplat
