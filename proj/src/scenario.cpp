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

#include "vplat/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vplat/error.hpp"
#include "vplat/kv.hpp"
#include "vplat/loader.hpp"
#include "vplat/simulator.hpp"
#include "vplat/trace.hpp"

namespace vplat {

namespace {

constexpr std::array<std::string_view, 32> kAbiNames = {
    "zero", "ra", "sp", "gp", "tp",  "t0",  "t1", "t2", "s0", "s1", "a0",
    "a1",   "a2", "a3", "a4", "a5",  "a6",  "a7", "s2", "s3", "s4", "s5",
    "s6",   "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"};

std::optional<unsigned> parse_register(std::string_view s) {
  if (s == "fp") return 8;
  for (unsigned i = 0; i < kAbiNames.size(); ++i)
    if (s == kAbiNames[i]) return i;
  if (s.size() >= 2 && s[0] == 'x') {
    unsigned v = 0;
    for (char c : s.substr(1)) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<unsigned>(c - '0');
      if (v > 31) return std::nullopt;
    }
    return v;
  }
  return std::nullopt;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

/// Numeric token of a multi-field value, reported against the whole entry.
std::uint64_t field_u64(const KvEntry& e, const std::string& token) {
  KvEntry tmp = e;
  tmp.value = token;
  return kv_u64(tmp);
}

std::uint32_t field_u32(const KvEntry& e, const std::string& token) {
  KvEntry tmp = e;
  tmp.value = token;
  return kv_u32(tmp);
}

unsigned field_width(const KvEntry& e, const std::string& token) {
  const auto w = field_u64(e, token);
  if (w != 1 && w != 2 && w != 4)
    throw Error(Errc::kInvalidValue, kv_where(e, "width must be 1, 2 or 4"));
  return static_cast<unsigned>(w);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

Assertion parse_assertion(const KvEntry& e) {
  Assertion a;
  a.source = e.key + " = " + (e.quoted ? kv_quote(e.value) : e.value);
  const auto f = split_ws(e.value);
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (f.size() < lo || f.size() > hi)
      throw Error(Errc::kInvalidValue, kv_where(e, "wrong number of fields"));
  };
  if (e.key == "exit_code") {
    need(1, 1);
    a.kind = AssertionKind::kExitCode;
    a.expected = field_u32(e, f[0]);
  } else if (e.key == "register") {
    need(2, 2);
    a.kind = AssertionKind::kRegister;
    const auto reg = parse_register(f[0]);
    if (!reg) throw Error(Errc::kInvalidValue, kv_where(e, "unknown register " + f[0]));
    a.where = *reg;
    a.expected = field_u32(e, f[1]);
  } else if (e.key == "memory") {
    need(2, 3);
    a.kind = AssertionKind::kMemory;
    a.where = field_u32(e, f[0]);
    a.expected = field_u32(e, f[1]);
    if (f.size() == 3) a.width = field_width(e, f[2]);
  } else if (e.key == "console") {
    a.kind = AssertionKind::kConsole;
    a.expected_text = e.value;
  } else if (e.key == "device") {
    need(3, 4);
    a.kind = AssertionKind::kDeviceStatus;
    a.device = f[0];
    a.where = field_u32(e, f[1]);
    a.expected = field_u32(e, f[2]);
    if (f.size() == 4) a.width = field_width(e, f[3]);
  } else {
    throw Error(Errc::kUnknownKey, kv_where(e, "not a valid assertion"));
  }
  return a;
}

std::string hex32(std::uint32_t v) { return kv_hex(v); }

AssertionResult evaluate(const Assertion& a, const Simulator& sim) {
  AssertionResult r;
  r.description = a.source;
  const auto width_mask = a.width >= 4 ? 0xFFFFFFFFu : (1u << (8 * a.width)) - 1u;
  switch (a.kind) {
    case AssertionKind::kExitCode:
      if (sim.cpu().exit_code) {
        r.actual = std::to_string(*sim.cpu().exit_code);
        r.passed = *sim.cpu().exit_code == a.expected;
      } else {
        r.actual = "no exit";
      }
      break;
    case AssertionKind::kRegister: {
      const auto v = sim.cpu().reg(a.where);
      r.actual = hex32(v);
      r.passed = v == a.expected;
      break;
    }
    case AssertionKind::kMemory: {
      const auto v = sim.peek(a.where, a.width);
      r.actual = v ? hex32(*v) : "unmapped";
      r.passed = v && *v == (a.expected & width_mask);
      break;
    }
    case AssertionKind::kConsole: {
      std::string out;
      for (const auto& d : sim.device_table())
        if (d->kind() == "console") out += static_cast<const ConsoleModel*>(d)->output();
      r.actual = kv_quote(out);
      r.passed = out == a.expected_text;
      break;
    }
    case AssertionKind::kDeviceStatus: {
      const Device* d = sim.device(a.device);
      if (d == nullptr || std::uint64_t{a.where} + a.width > d->size()) {
        r.actual = "no such register";
        break;
      }
      const auto v = d->peek(a.where, a.width);
      r.actual = hex32(v);
      r.passed = v == (a.expected & width_mask);
      break;
    }
  }
  return r;
}

std::string_view stop_name(StopKind k) {
  switch (k) {
    case StopKind::kExit: return "exit";
    case StopKind::kCycles: return "cycles";
    case StopKind::kPc: return "pc";
  }
  return "?";
}

RunResult error_result(const TestScenario& scenario, const std::string& diagnostic) {
  RunResult r;
  r.verdict.scenario_id = scenario.id;
  r.verdict.outcome = Outcome::kError;
  r.verdict.stop_reason = "error";
  r.verdict.diagnostic = diagnostic;
  return r;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::kPass: return "pass";
    case Outcome::kFail: return "fail";
    case Outcome::kError: return "error";
  }
  return "?";
}

TestScenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  const KvDocument doc = parse_kv(text);
  TestScenario s;
  bool seen_scenario = false;
  std::set<std::string> seen_sections;

  for (const auto& section : doc.sections) {
    if (!seen_sections.insert(section.name).second)
      throw Error(Errc::kSyntaxError, "line " + std::to_string(section.line) +
                                          ": duplicate [" + section.name + "] section");
    if (section.name == "scenario") {
      seen_scenario = true;
      std::set<std::string> keys;
      for (const auto& e : section.entries) {
        if (!keys.insert(e.key).second)
          throw Error(Errc::kSyntaxError, kv_where(e, "duplicate key"));
        if (e.key == "id") {
          s.id = e.value;
        } else if (e.key == "granularity") {
          if (std::find(std::begin(kGranularities), std::end(kGranularities), e.value) ==
              std::end(kGranularities))
            throw Error(Errc::kInvalidValue, kv_where(e, "unknown granularity"));
          s.granularity = e.value;
        } else if (e.key == "platform") {
          s.platform = resolve(base_dir, e.value);
        } else if (e.key == "binary") {
          s.binary = resolve(base_dir, e.value);
        } else if (e.key == "load_address") {
          s.load_address = kv_u32(e);
        } else if (e.key == "campaign") {
          s.campaign = resolve(base_dir, e.value);
        } else if (e.key == "seed") {
          s.seed = kv_u64(e);
        } else if (e.key == "stop") {
          if (e.value == "exit") {
            s.stop.kind = StopKind::kExit;
          } else if (e.value == "cycles") {
            s.stop.kind = StopKind::kCycles;
          } else if (e.value.starts_with("pc:")) {
            s.stop.kind = StopKind::kPc;
            s.stop.pc = field_u32(e, e.value.substr(3));
          } else {
            throw Error(Errc::kInvalidValue, kv_where(e, "stop must be exit, cycles or pc:ADDR"));
          }
        } else if (e.key == "max_cycles") {
          s.stop.max_cycles = kv_u64(e);
          if (s.stop.max_cycles == 0)
            throw Error(Errc::kInvalidValue, kv_where(e, "max_cycles must be positive"));
        } else {
          throw Error(Errc::kUnknownKey, kv_where(e, "not valid in [scenario]"));
        }
      }
    } else if (section.name == "stimuli") {
      for (const auto& e : section.entries) {
        if (e.key != "write") throw Error(Errc::kUnknownKey, kv_where(e, "expected write"));
        const auto f = split_ws(e.value);
        if (f.size() != 4 && f.size() != 5)
          throw Error(Errc::kInvalidValue,
                      kv_where(e, "expected: cycle device offset value [width]"));
        Stimulus st;
        st.cycle = field_u64(e, f[0]);
        st.device = f[1];
        st.offset = field_u32(e, f[2]);
        st.value = field_u32(e, f[3]);
        if (f.size() == 5) st.width = field_width(e, f[4]);
        s.stimuli.push_back(std::move(st));
      }
    } else if (section.name == "assert") {
      for (const auto& e : section.entries) s.assertions.push_back(parse_assertion(e));
    } else {
      throw Error(Errc::kSyntaxError, "line " + std::to_string(section.line) +
                                          ": unknown section [" + section.name + "]");
    }
  }
  if (!seen_scenario) throw Error(Errc::kMissingField, "[scenario] section");
  if (s.id.empty()) throw Error(Errc::kMissingField, "id");
  if (s.platform.empty()) throw Error(Errc::kMissingField, "platform");
  if (s.binary.empty()) throw Error(Errc::kMissingField, "binary");
  std::stable_sort(s.stimuli.begin(), s.stimuli.end(),
                   [](const Stimulus& a, const Stimulus& b) { return a.cycle < b.cycle; });
  return s;
}

ScenarioInputs load_inputs(const TestScenario& scenario) {
  ScenarioInputs in;
  in.platform = parse_platform(read_text(scenario.platform));
  in.image = read_file(scenario.binary);
  if (scenario.campaign) in.campaign = parse_campaign(read_text(*scenario.campaign));
  return in;
}

RunResult run_scenario(const TestScenario& scenario, const ScenarioInputs& inputs,
                       const RunOptions& options) {
  RunResult result;
  Verdict& v = result.verdict;
  v.scenario_id = scenario.id;
  const std::span<const std::uint8_t> image(inputs.image);
  result.image_hash_before = image_hash(image);

  std::unique_ptr<Simulator> sim;
  LoadedImage loaded;
  try {
    sim = instantiate(inputs.platform);
    loaded = load_binary(*sim, image, scenario.load_address);
    sim->cpu() = reset(loaded.entry);
    if (inputs.campaign && options.fault_engine) {
      const CompiledCampaign compiled = compile_campaign(*inputs.campaign, inputs.platform);
      auto seed = options.seed_override ? options.seed_override : scenario.seed;
      sim->attach_campaign(compiled, seed);
    }
    for (const auto& st : scenario.stimuli) {
      const Region* region = sim->map().find_device(st.device);
      if (region == nullptr) throw Error(Errc::kUnknownTarget, "stimulus device " + st.device);
    }
  } catch (const Error& e) {
    RunResult r = error_result(scenario, e.what());
    r.image_hash_before = r.image_hash_after = result.image_hash_before;
    return r;
  }
  result.coverage = make_coverage(*sim, loaded);

  std::string& trace = result.trace;
  std::size_t next_stimulus = 0;
  std::string reason;
  while (true) {
    CpuState& cpu = sim->cpu();
    if (scenario.stop.kind == StopKind::kPc && cpu.pc == scenario.stop.pc) {
      reason = "pc";
      break;
    }
    if (cpu.cycles >= scenario.stop.max_cycles) {
      reason = "cycles";
      break;
    }
    while (next_stimulus < scenario.stimuli.size() &&
           scenario.stimuli[next_stimulus].cycle <= cpu.cycles) {
      const Stimulus& st = scenario.stimuli[next_stimulus++];
      const Region* region = sim->map().find_device(st.device);
      Transaction tx;
      tx.kind = Access::kWrite;
      tx.address = region->base + st.offset;
      tx.width = static_cast<std::uint8_t>(st.width);
      tx.payload = st.value;
      tx.initiator = kInitiatorStimulus;
      tx.issue_cycle = cpu.cycles;
      sim->tick_devices();
      sim->access(tx);
    }

    StepOutcome o;
    try {
      o = sim->step();
    } catch (const Error& e) {
      reason = "error";
      v.diagnostic = e.what();
      break;
    }
    if (options.trace) {
      trace += format_trace_line(o);
      trace += '\n';
    }
    result.coverage.record(o.record);
    if (o.kind == StepKind::kTrap) {
      reason = "trap";
      const auto& t = *o.trap;
      v.diagnostic = "unhandled trap " + std::string(trap_name(t.cause)) + " value " +
                     kv_hex(t.value) + " at pc " + kv_hex(o.record.pc);
      break;
    }
    ++v.instructions;
    if (o.kind == StepKind::kHalt) {
      reason = "exit";
      break;
    }
  }
  sim->tick_devices();

  v.stop_reason = reason;
  v.cycles = sim->cpu().cycles;
  v.exit_code = sim->cpu().exit_code;
  v.fault_activations = sim->fault_log().size();
  v.coverage_percent = round2(result.coverage.instruction_percent());
  v.branch_coverage_percent = round2(result.coverage.branch_percent());
  for (const auto& a : scenario.assertions) v.assertions.push_back(evaluate(a, *sim));
  const bool all_hold = std::all_of(v.assertions.begin(), v.assertions.end(),
                                    [](const AssertionResult& r) { return r.passed; });

  if (reason == "trap" || reason == "error") {
    v.outcome = Outcome::kError;
  } else if (reason == "cycles" && scenario.stop.kind != StopKind::kCycles) {
    v.outcome = Outcome::kError;
    v.diagnostic = "cycle budget of " + std::to_string(scenario.stop.max_cycles) +
                   " exhausted before the expected stop (" +
                   std::string(stop_name(scenario.stop.kind)) + ")";
  } else if (reason != stop_name(scenario.stop.kind)) {
    v.outcome = Outcome::kFail;
    v.diagnostic = "stopped by " + reason + ", expected " +
                   std::string(stop_name(scenario.stop.kind));
  } else {
    v.outcome = all_hold ? Outcome::kPass : Outcome::kFail;
    if (!all_hold) v.diagnostic = "assertion failed";
  }

  result.fault_log = sim->fault_log().render();
  for (const auto& d : sim->device_table())
    if (d->kind() == "console") result.console += static_cast<const ConsoleModel*>(d)->output();
  result.image_hash_after = image_hash(image);
  return result;
}

RunResult run_scenario(const TestScenario& scenario, const RunOptions& options) {
  ScenarioInputs inputs;
  try {
    inputs = load_inputs(scenario);
  } catch (const Error& e) {
    return error_result(scenario, e.what());
  }
  return run_scenario(scenario, inputs, options);
}

void write_artifacts(RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + dir.string());
  Verdict& v = result.verdict;
  const std::string stem = v.scenario_id;
  if (!result.trace.empty()) {
    v.trace_path = stem + ".trace";
    write_text(dir / v.trace_path, result.trace);
  }
  v.coverage_path = stem + ".cov";
  write_text(dir / v.coverage_path, result.coverage.render());
  v.fault_log_path = stem + ".faults";
  write_text(dir / v.fault_log_path, result.fault_log);
  write_text(dir / (stem + ".verdict.json"), verdict_json(v) + "\n");
}

std::string verdict_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["id"] = v.scenario_id;
  j["outcome"] = outcome_name(v.outcome);
  j["stop"] = v.stop_reason;
  j["cycles"] = v.cycles;
  j["instructions"] = v.instructions;
  j["fault_activations"] = v.fault_activations;
  j["coverage_percent"] = v.coverage_percent;
  j["branch_coverage_percent"] = v.branch_coverage_percent;
  if (v.exit_code)
    j["exit_code"] = *v.exit_code;
  else
    j["exit_code"] = nullptr;
  auto asserts = nlohmann::ordered_json::array();
  for (const auto& a : v.assertions) {
    nlohmann::ordered_json ja;
    ja["assert"] = a.description;
    ja["passed"] = a.passed;
    ja["actual"] = a.actual;
    asserts.push_back(std::move(ja));
  }
  j["assertions"] = std::move(asserts);
  j["diagnostic"] = v.diagnostic;
  nlohmann::ordered_json art;
  art["trace"] = v.trace_path;
  art["coverage"] = v.coverage_path;
  art["fault_log"] = v.fault_log_path;
  j["artifacts"] = std::move(art);
  return j.dump();
}

std::string verdict_summary(const Verdict& v) {
  std::ostringstream out;
  out << v.scenario_id << ": " << outcome_name(v.outcome) << " (stop=" << v.stop_reason
      << ", cycles=" << v.cycles << ", instructions=" << v.instructions
      << ", fault activations=" << v.fault_activations << ", coverage=" << v.coverage_percent
      << "%)\n";
  if (!v.diagnostic.empty()) out << "  " << v.diagnostic << "\n";
  for (const auto& a : v.assertions)
    out << "  [" << (a.passed ? "ok" : "FAIL") << "] " << a.description
        << " (actual " << a.actual << ")\n";
  return out.str();
}

}  // namespace vplat
