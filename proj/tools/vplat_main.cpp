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

// vplat command-line driver.
//
// Exit statuses: 0 pass / success, 1 fail, 2 simulation error,
// 3 usage, parse or missing-file error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vplat/campaign.hpp"
#include "vplat/coverage.hpp"
#include "vplat/error.hpp"
#include "vplat/fault.hpp"
#include "vplat/isa.hpp"
#include "vplat/kv.hpp"
#include "vplat/loader.hpp"
#include "vplat/platform.hpp"
#include "vplat/scenario.hpp"
#include "vplat/simulator.hpp"
#include "vplat/trace.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitSimError = 2;
constexpr int kExitUsage = 3;

int outcome_status(vplat::Outcome o) {
  switch (o) {
    case vplat::Outcome::kPass: return kExitPass;
    case vplat::Outcome::kFail: return kExitFail;
    case vplat::Outcome::kError: return kExitSimError;
  }
  return kExitSimError;
}

bool require_file(const fs::path& p) {
  std::error_code ec;
  if (fs::is_regular_file(p, ec)) return true;
  std::cerr << "vplat: no such file: " << p.string() << "\n";
  return false;
}

int cmd_run(const fs::path& path, const vplat::RunOptions& options,
            const std::optional<fs::path>& out) {
  if (!require_file(path)) return kExitUsage;
  vplat::TestScenario scenario;
  vplat::ScenarioInputs inputs;
  try {
    scenario = vplat::parse_scenario(vplat::read_text(path), path.parent_path());
    inputs = vplat::load_inputs(scenario);
  } catch (const vplat::Error& e) {
    std::cerr << "vplat: " << path.string() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  vplat::RunResult result = vplat::run_scenario(scenario, inputs, options);
  if (out) {
    try {
      vplat::write_artifacts(result, *out);
    } catch (const vplat::Error& e) {
      std::cerr << "vplat: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  std::cout << vplat::verdict_summary(result.verdict);
  if (result.verdict.outcome == vplat::Outcome::kError)
    std::cerr << "vplat: " << result.verdict.diagnostic << "\n";
  return outcome_status(result.verdict.outcome);
}

int cmd_campaign(const fs::path& list, const vplat::BatchOptions& options) {
  if (!require_file(list)) return kExitUsage;
  std::vector<fs::path> scenarios;
  try {
    scenarios = vplat::parse_scenario_list(vplat::read_text(list), list.parent_path());
  } catch (const vplat::Error& e) {
    std::cerr << "vplat: " << e.what() << "\n";
    return kExitUsage;
  }
  if (scenarios.empty()) {
    std::cerr << "vplat: " << list.string() << " names no scenarios\n";
    return kExitUsage;
  }
  vplat::BatchResult batch;
  try {
    batch = vplat::run_batch(scenarios, options);
  } catch (const vplat::Error& e) {
    std::cerr << "vplat: " << e.what() << "\n";
    return kExitUsage;
  }
  std::cout << batch.summary;
  if (batch.all_passed()) return kExitPass;
  for (const auto& v : batch.verdicts)
    if (v.outcome == vplat::Outcome::kFail) return kExitFail;
  return kExitSimError;
}

enum class FileKind { kPlatform, kScenario, kCampaign, kUnknown };

FileKind detect(const vplat::KvDocument& doc) {
  for (const auto& s : doc.sections) {
    if (s.name == "platform" || s.name.rfind("device.", 0) == 0) return FileKind::kPlatform;
    if (s.name == "scenario") return FileKind::kScenario;
    if (s.name == "campaign" || s.name.rfind("fault.", 0) == 0) return FileKind::kCampaign;
  }
  return FileKind::kUnknown;
}

int cmd_validate(const std::vector<fs::path>& files) {
  int status = kExitPass;
  for (const auto& path : files) {
    if (!require_file(path)) {
      status = kExitUsage;
      continue;
    }
    try {
      const std::string text = vplat::read_text(path);
      switch (detect(vplat::parse_kv(text))) {
        case FileKind::kPlatform:
          vplat::validate_platform(vplat::parse_platform(text));
          std::cout << path.string() << ": platform ok\n";
          break;
        case FileKind::kScenario: {
          const auto s = vplat::parse_scenario(text, path.parent_path());
          const auto in = vplat::load_inputs(s);
          std::cout << path.string() << ": scenario ok\n";
          break;
        }
        case FileKind::kCampaign:
          vplat::parse_campaign(text);
          std::cout << path.string() << ": campaign ok\n";
          break;
        case FileKind::kUnknown:
          std::cerr << path.string() << ": unrecognised file\n";
          status = kExitUsage;
          break;
      }
    } catch (const vplat::Error& e) {
      std::cerr << path.string() << ": " << e.what() << "\n";
      status = kExitUsage;
    }
  }
  return status;
}

int cmd_report(const std::vector<fs::path>& files) {
  std::size_t pass = 0, fail = 0, error = 0;
  std::vector<vplat::CoverageReport> coverage;
  for (const auto& path : files) {
    if (!require_file(path)) return kExitUsage;
    try {
      const std::string text = vplat::read_text(path);
      if (path.extension() == ".cov") {
        coverage.push_back(vplat::parse_coverage(text));
        continue;
      }
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        if (!j.contains("outcome")) continue;
        const auto o = j.at("outcome").get<std::string>();
        std::cout << j.value("id", std::string("?")) << ": " << o;
        if (j.contains("diagnostic") && !j.at("diagnostic").get<std::string>().empty())
          std::cout << " (" << j.at("diagnostic").get<std::string>() << ")";
        std::cout << "\n";
        if (o == "pass") ++pass;
        else if (o == "fail") ++fail;
        else ++error;
      }
    } catch (const vplat::Error& e) {
      std::cerr << path.string() << ": " << e.what() << "\n";
      return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << path.string() << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }
  std::cout << (pass + fail + error) << " scenarios: " << pass << " pass, " << fail
            << " fail, " << error << " error\n";
  if (!coverage.empty()) {
    try {
      const auto merged = vplat::merge_coverage(coverage);
      std::cout << "coverage: instructions " << merged.instruction_percent()
                << "%, branch outcomes " << merged.branch_percent() << "%\n";
    } catch (const vplat::Error& e) {
      std::cerr << "vplat: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return kExitPass;
}

void print_regs(const vplat::CpuState& cpu) {
  std::cout << "pc  " << vplat::kv_hex(cpu.pc) << "  cycles " << cpu.cycles << "\n";
  for (unsigned i = 0; i < 32; ++i) {
    std::cout << (i < 10 ? "x" + std::to_string(i) + " " : "x" + std::to_string(i)) << " "
              << vplat::kv_hex(cpu.reg(i)) << ((i % 4 == 3) ? "\n" : "  ");
  }
}

int cmd_step(const fs::path& platform_path, const fs::path& binary_path,
             std::optional<std::uint32_t> load_address) {
  if (!require_file(platform_path) || !require_file(binary_path)) return kExitUsage;
  std::unique_ptr<vplat::Simulator> sim;
  try {
    sim = vplat::instantiate(vplat::parse_platform(vplat::read_text(platform_path)));
    const auto image = vplat::read_file(binary_path);
    const auto loaded = vplat::load_binary(*sim, image, load_address);
    sim->cpu() = vplat::reset(loaded.entry);
  } catch (const vplat::Error& e) {
    std::cerr << "vplat: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string help =
      "commands: step [N], regs, reg <n>, mem <addr> [len], quit\n";
  std::string line;
  std::cout << "(vplat) " << std::flush;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    std::vector<std::string> args;
    for (std::string a; in >> a;) args.push_back(a);

    auto number = [](const std::string& s) -> std::optional<std::uint64_t> {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 0);
        if (used != s.size()) return std::nullopt;
        return v;
      } catch (...) {
        return std::nullopt;
      }
    };

    if (cmd.empty()) {
    } else if (cmd == "quit" || cmd == "q") {
      return kExitPass;
    } else if (cmd == "step" || cmd == "s") {
      std::optional<std::uint64_t> n = 1;
      if (args.size() == 1) n = number(args[0]);
      if (args.size() > 1 || !n || *n == 0) {
        std::cout << "usage: step [N]\n";
      } else {
        for (std::uint64_t i = 0; i < *n; ++i) {
          if (sim->cpu().halted) {
            std::cout << "halted\n";
            break;
          }
          const auto o = sim->step();
          std::cout << vplat::format_trace_line(o) << "\n";
          if (o.kind != vplat::StepKind::kRetired) break;
        }
        std::cout << "pc " << vplat::kv_hex(sim->cpu().pc) << " cycles "
                  << sim->cpu().cycles << (sim->cpu().halted ? " halted" : "") << "\n";
      }
    } else if (cmd == "regs") {
      print_regs(sim->cpu());
    } else if (cmd == "reg") {
      const auto n = args.size() == 1 ? number(args[0]) : std::nullopt;
      if (!n || *n > 31) {
        std::cout << "usage: reg <0-31>\n";
      } else {
        std::cout << "x" << *n << " " << vplat::kv_hex(sim->cpu().reg(static_cast<unsigned>(*n)))
                  << "\n";
      }
    } else if (cmd == "mem") {
      const auto addr = !args.empty() && args.size() <= 2 ? number(args[0]) : std::nullopt;
      const auto len = args.size() == 2 ? number(args[1]) : std::optional<std::uint64_t>(4);
      if (!addr || !len || *addr > 0xFFFFFFFFull || *len == 0 || *len > 4096) {
        std::cout << "usage: mem <addr> [len]\n";
      } else {
        for (std::uint64_t i = 0; i < *len; ++i) {
          const std::uint64_t at = *addr + i;
          if (i % 16 == 0) std::cout << (i ? "\n" : "") << vplat::kv_hex(static_cast<std::uint32_t>(at)) << ":";
          const auto v = at <= 0xFFFFFFFFull ? sim->peek(static_cast<std::uint32_t>(at), 1)
                                             : std::nullopt;
          if (v) std::cout << " " << vplat::kv_hex(*v, 2);
          else std::cout << " --";
        }
        std::cout << "\n";
      }
    } else if (cmd == "help" || cmd == "?") {
      std::cout << help;
    } else {
      std::cout << "unknown command '" << cmd << "'; " << help;
    }
    std::cout << "(vplat) " << std::flush;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vplat: RV32I virtual platform with fault injection"};
  app.require_subcommand(1, 1);

  std::optional<std::uint64_t> seed;
  bool trace = false;
  std::optional<std::string> out;
  unsigned jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Override the campaign seed");
    sub->add_flag("--trace", trace, "Record an instruction trace");
    sub->add_option("--out", out, "Artifact output directory");
  };

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  add_common(run);

  std::string list_path;
  auto* campaign = app.add_subcommand("campaign", "Run every scenario in a list file");
  campaign->add_option("list", list_path, "Scenario list file")->required();
  add_common(campaign);
  campaign->add_option("--jobs", jobs, "Concurrent scenarios")->check(CLI::Range(1u, 256u));

  std::string platform_path, binary_path;
  std::optional<std::uint32_t> load_address;
  auto* step = app.add_subcommand("step", "Step a program interactively");
  step->add_option("platform", platform_path, "Platform file")->required();
  step->add_option("binary", binary_path, "Program image")->required();
  step->add_option("--load-address", load_address, "Load address of a raw image");

  std::vector<std::string> validate_files;
  auto* validate = app.add_subcommand("validate", "Check platform, scenario or campaign files");
  validate->add_option("files", validate_files, "Files to check")->required();

  std::vector<std::string> report_files;
  auto* report = app.add_subcommand("report", "Summarise verdict and coverage files");
  report->add_option("files", report_files, "report.jsonl, *.verdict.json or *.cov files")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  vplat::RunOptions options;
  options.trace = trace;
  options.seed_override = seed;
  const std::optional<fs::path> out_dir =
      out ? std::optional<fs::path>(*out) : std::nullopt;

  try {
    if (*run) return cmd_run(scenario_path, options, out_dir);
    if (*campaign) {
      vplat::BatchOptions batch;
      batch.run = options;
      batch.jobs = jobs;
      batch.out_dir = out_dir;
      return cmd_campaign(list_path, batch);
    }
    if (*step) return cmd_step(platform_path, binary_path, load_address);
    if (*validate) {
      std::vector<fs::path> files(validate_files.begin(), validate_files.end());
      return cmd_validate(files);
    }
    if (*report) {
      std::vector<fs::path> files(report_files.begin(), report_files.end());
      return cmd_report(files);
    }
  } catch (const std::exception& e) {
    std::cerr << "vplat: internal error: " << e.what() << "\n";
    return kExitSimError;
  }
  return kExitUsage;
}
