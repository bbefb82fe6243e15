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

#include "vplat/devices.hpp"

#include <cstdio>

#include "vplat/error.hpp"

namespace vplat {

namespace {

std::uint32_t width_mask(unsigned width) {
  return width >= 4 ? 0xFFFFFFFFu : (1u << (8 * width)) - 1u;
}

/// Sub-word view of a 32-bit register that starts at `reg_offset`.
std::uint32_t slice(std::uint32_t reg, std::uint32_t reg_offset,
                    std::uint32_t offset, unsigned width) {
  return (reg >> (8 * (offset - reg_offset))) & width_mask(width);
}

void append_hex(std::string& out, std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(v));
  out += buf;
}

}  // namespace

// ---------------------------------------------------------------- Device

std::string_view event_name(DeviceEventKind kind) {
  switch (kind) {
    case DeviceEventKind::kInterruptRaised: return "irq-raised";
    case DeviceEventKind::kInterruptCleared: return "irq-cleared";
    case DeviceEventKind::kProgrammingComplete: return "programming-complete";
  }
  return "?";
}

Response Device::handle(const Transaction& tx, std::uint32_t offset) {
  if (tx.kind == Access::kRead) return read(offset, tx.width, tx.issue_cycle);
  return write(offset, tx.width, tx.payload, tx.issue_cycle);
}

std::vector<DeviceEvent> Device::tick(std::uint64_t) { return {}; }

bool Device::poke(std::uint32_t, unsigned, std::uint32_t) { return false; }

void Device::activate_fault(std::shared_ptr<FaultActivation> activation) {
  activations_.push_back(std::move(activation));
}

FaultActivation* Device::fire(std::string_view name, std::uint64_t now) {
  FaultActivation* first = nullptr;
  for (auto& a : activations_) {
    if (a->name() != name) continue;
    if (a->fire(now) && first == nullptr) first = a.get();
  }
  return first;
}

// ---------------------------------------------------------------- kinds

std::string_view kind_name(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::kRom: return "rom";
    case DeviceKind::kRam: return "ram";
    case DeviceKind::kEeprom: return "eeprom";
    case DeviceKind::kTimer: return "timer";
    case DeviceKind::kConsole: return "console";
  }
  return "?";
}

std::optional<DeviceKind> parse_kind(std::string_view text) {
  for (auto k : {DeviceKind::kRom, DeviceKind::kRam, DeviceKind::kEeprom,
                 DeviceKind::kTimer, DeviceKind::kConsole})
    if (kind_name(k) == text) return k;
  return std::nullopt;
}

std::vector<std::string> device_fault_names(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::kEeprom: return {"slow_response", "corrupt_write"};
    case DeviceKind::kTimer: return {"missed_compare"};
    case DeviceKind::kConsole: return {"drop_byte"};
    default: return {};
  }
}

std::uint64_t ms_to_cycles(std::uint64_t ms, std::uint64_t clock_hz) {
  return ms * clock_hz / 1000;
}

// ---------------------------------------------------------------- memory

MemoryDevice::MemoryDevice(std::string id, std::uint32_t size, bool writable,
                           std::uint32_t wait_cycles)
    : Device(std::move(id), size),
      bytes_(size, 0),
      writable_(writable),
      wait_cycles_(wait_cycles) {}

Response MemoryDevice::read(std::uint32_t offset, unsigned width,
                            std::uint64_t) {
  if (std::uint64_t{offset} + width > bytes_.size()) return Response::bus_error();
  return Response::ok(peek(offset, width), wait_cycles_);
}

Response MemoryDevice::write(std::uint32_t offset, unsigned width,
                             std::uint32_t value, std::uint64_t) {
  if (!writable_) return Response::bus_error();
  if (!poke(offset, width, value)) return Response::bus_error();
  return Response::ok(0, wait_cycles_);
}

std::uint32_t MemoryDevice::peek(std::uint32_t offset, unsigned width) const {
  std::uint32_t v = 0;
  for (unsigned i = 0; i < width && offset + i < bytes_.size(); ++i)
    v |= std::uint32_t{bytes_[offset + i]} << (8 * i);
  return v;
}

bool MemoryDevice::poke(std::uint32_t offset, unsigned width,
                        std::uint32_t value) {
  if (std::uint64_t{offset} + width > bytes_.size()) return false;
  for (unsigned i = 0; i < width; ++i)
    bytes_[offset + i] = static_cast<std::uint8_t>(value >> (8 * i));
  return true;
}

std::string MemoryDevice::snapshot() const {
  std::string out = id() + " " + std::string(kind()) + " ";
  // Run-length dump keeps large, mostly-zero memories cheap to compare.
  std::size_t i = 0;
  while (i < bytes_.size()) {
    std::size_t j = i;
    while (j < bytes_.size() && bytes_[j] == bytes_[i]) ++j;
    append_hex(out, bytes_[i]);
    out += '*';
    append_hex(out, j - i);
    out += ' ';
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------- eeprom

EepromModel::EepromModel(std::string id, std::uint32_t size,
                         std::uint32_t write_latency_ms, std::uint64_t clock_hz,
                         std::uint32_t wait_cycles)
    : Device(std::move(id), size),
      cells_(size >= 4 ? size - 4 : 0, kErased),
      clock_hz_(clock_hz),
      nominal_latency_(ms_to_cycles(write_latency_ms, clock_hz)),
      wait_cycles_(wait_cycles) {}

void EepromModel::advance(std::uint64_t now) {
  if (pending_ && now >= pending_->deadline) {
    cells_[pending_->cell] = pending_->value;
    queued_.push_back({pending_->deadline, id(),
                       DeviceEventKind::kProgrammingComplete, pending_->cell});
    pending_.reset();
  }
}

Response EepromModel::read(std::uint32_t offset, unsigned width,
                           std::uint64_t now) {
  advance(now);
  if (offset >= size() || std::uint64_t{offset} + width > size())
    return Response::bus_error();
  return Response::ok(peek(offset, width), wait_cycles_);
}

Response EepromModel::write(std::uint32_t offset, unsigned width,
                            std::uint32_t value, std::uint64_t now) {
  advance(now);
  if (offset >= cells() || width != 1) return Response::bus_error();
  if (pending_) return Response::busy(wait_cycles_);

  std::uint64_t latency = nominal_latency_;
  if (FaultActivation* slow = fire("slow_response", now)) {
    const auto& p = slow->params();
    const std::uint64_t lo = ms_to_cycles(p.latency_ms_min.value_or(0), clock_hz_);
    const std::uint64_t hi = ms_to_cycles(p.latency_ms_max.value_or(0), clock_hz_);
    latency = slow->rng().uniform(lo, hi);
    slow->record(now, nominal_latency_, latency);
  }
  auto byte = static_cast<std::uint8_t>(value);
  if (FaultActivation* corrupt = fire("corrupt_write", now)) {
    const auto before = byte;
    byte = static_cast<std::uint8_t>(byte ^ corrupt->params().mask.value_or(0x01));
    corrupt->record(now, before, byte);
  }
  last_latency_ = latency;
  pending_ = Pending{offset, byte, now + latency};
  advance(now);
  return Response::ok(0, wait_cycles_);
}

std::vector<DeviceEvent> EepromModel::tick(std::uint64_t now) {
  advance(now);
  return std::exchange(queued_, {});
}

std::uint32_t EepromModel::peek(std::uint32_t offset, unsigned width) const {
  std::uint32_t v = 0;
  for (unsigned i = 0; i < width; ++i) {
    const std::uint32_t at = offset + i;
    std::uint8_t b = 0;
    if (at < cells())
      b = cells_[at];
    else if (at < size())
      b = static_cast<std::uint8_t>(slice(pending_ ? 1u : 0u, cells(), at, 1));
    v |= std::uint32_t{b} << (8 * i);
  }
  return v;
}

bool EepromModel::poke(std::uint32_t offset, unsigned width,
                       std::uint32_t value) {
  if (std::uint64_t{offset} + width > cells()) return false;
  for (unsigned i = 0; i < width; ++i)
    cells_[offset + i] = static_cast<std::uint8_t>(value >> (8 * i));
  return true;
}

std::vector<std::string> EepromModel::fault_names() const {
  return device_fault_names(DeviceKind::kEeprom);
}

std::string EepromModel::snapshot() const {
  std::string out = id() + " eeprom ";
  for (auto b : cells_) {
    append_hex(out, b);
    out += ' ';
  }
  out += "pending=";
  if (pending_) {
    append_hex(out, pending_->cell);
    out += ':';
    append_hex(out, pending_->value);
    out += '@';
    append_hex(out, pending_->deadline);
  } else {
    out += '-';
  }
  out += " queued=" + std::to_string(queued_.size());
  return out;
}

// ---------------------------------------------------------------- timer

TimerModel::TimerModel(std::string id, std::uint32_t size)
    : Device(std::move(id), size) {}

std::vector<DeviceEvent> TimerModel::tick(std::uint64_t now) {
  counter_ = now;
  if (armed_ && !pending_ && counter_ >= compare_) {
    armed_ = false;
    if (FaultActivation* missed = fire("missed_compare", now)) {
      missed->record(now, compare_, 0, "suppressed");
    } else {
      pending_ = true;
      queued_.push_back({now, id(), DeviceEventKind::kInterruptRaised, compare_});
    }
  }
  return std::exchange(queued_, {});
}

Response TimerModel::read(std::uint32_t offset, unsigned width,
                          std::uint64_t now) {
  if (now > counter_) counter_ = now;
  if (std::uint64_t{offset} + width > 16) return Response::bus_error();
  return Response::ok(peek(offset, width));
}

Response TimerModel::write(std::uint32_t offset, unsigned width,
                           std::uint32_t value, std::uint64_t now) {
  if (width != 4) return Response::bus_error();
  switch (offset) {
    case 0x8:
      compare_ = value;
      armed_ = true;
      return Response::ok();
    case 0xC:
      if (pending_) {
        pending_ = false;
        queued_.push_back({now, id(), DeviceEventKind::kInterruptCleared, 0});
      }
      return Response::ok();
    default:
      return Response::bus_error();
  }
}

std::uint32_t TimerModel::peek(std::uint32_t offset, unsigned width) const {
  const std::uint32_t reg = offset & ~3u;
  std::uint32_t value = 0;
  switch (reg) {
    case 0x0: value = static_cast<std::uint32_t>(counter_); break;
    case 0x4: value = static_cast<std::uint32_t>(counter_ >> 32); break;
    case 0x8: value = compare_; break;
    case 0xC: value = pending_ ? 1u : 0u; break;
    default: return 0;
  }
  return slice(value, reg, offset, width);
}

std::vector<std::string> TimerModel::fault_names() const {
  return device_fault_names(DeviceKind::kTimer);
}

std::string TimerModel::snapshot() const {
  std::string out = id() + " timer counter=";
  append_hex(out, counter_);
  out += " compare=";
  append_hex(out, compare_);
  out += armed_ ? " armed" : " idle";
  out += pending_ ? " pending" : " clear";
  out += " queued=" + std::to_string(queued_.size());
  return out;
}

// ---------------------------------------------------------------- console

ConsoleModel::ConsoleModel(std::string id, std::uint32_t size)
    : Device(std::move(id), size) {}

Response ConsoleModel::read(std::uint32_t offset, unsigned width,
                            std::uint64_t) {
  if (std::uint64_t{offset} + width > 8) return Response::bus_error();
  return Response::ok(peek(offset, width));
}

Response ConsoleModel::write(std::uint32_t offset, unsigned,
                             std::uint32_t value, std::uint64_t now) {
  if (offset != 0) return Response::bus_error();
  const auto byte = static_cast<char>(value & 0xFF);
  if (FaultActivation* drop = fire("drop_byte", now)) {
    drop->record(now, static_cast<std::uint8_t>(byte), 0, "dropped");
    return Response::ok();
  }
  output_.push_back(byte);
  return Response::ok();
}

std::uint32_t ConsoleModel::peek(std::uint32_t offset, unsigned width) const {
  if (offset >= 4 && offset < 8) return slice(1u, 4, offset, width);
  return 0;
}

std::vector<std::string> ConsoleModel::fault_names() const {
  return device_fault_names(DeviceKind::kConsole);
}

std::string ConsoleModel::snapshot() const {
  std::string out = id() + " console ";
  for (unsigned char c : output_) append_hex(out, c), out += ' ';
  return out;
}

}  // namespace vplat
