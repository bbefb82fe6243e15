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

#include "vplat/campaign.hpp"

#include <atomic>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vplat/error.hpp"
#include "vplat/kv.hpp"
#include "vplat/loader.hpp"

namespace vplat {

std::vector<std::filesystem::path> parse_scenario_list(
    std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<std::filesystem::path> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    std::filesystem::path p = line.substr(b, e - b + 1);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    out.push_back(std::move(p));
  }
  return out;
}

bool BatchResult::all_passed() const {
  for (const auto& v : verdicts)
    if (v.outcome != Outcome::kPass) return false;
  return !verdicts.empty();
}

BatchResult run_batch(const std::vector<std::filesystem::path>& scenarios,
                      const BatchOptions& options) {
  struct Slot {
    RunResult result;
    bool has_coverage = false;
  };
  std::vector<Slot> slots(scenarios.size());

  auto run_one = [&](std::size_t i) {
    const auto& path = scenarios[i];
    TestScenario scenario;
    try {
      scenario = parse_scenario(read_text(path), path.parent_path());
    } catch (const Error& e) {
      Slot& s = slots[i];
      s.result.verdict.scenario_id = path.stem().string();
      s.result.verdict.outcome = Outcome::kError;
      s.result.verdict.stop_reason = "error";
      s.result.verdict.diagnostic = e.what();
      return;
    }
    Slot& s = slots[i];
    s.result = run_scenario(scenario, options.run);
    s.has_coverage = s.result.verdict.stop_reason != "error";
    if (options.out_dir) write_artifacts(s.result, *options.out_dir);
  };

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1 || scenarios.size() <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < scenarios.size(); i = next++) run_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  BatchResult out;
  std::vector<std::vector<CoverageReport>> groups;
  for (auto& s : slots) {
    out.verdicts.push_back(s.result.verdict);
    if (!s.has_coverage) continue;
    bool placed = false;
    for (auto& g : groups) {
      if (g.front().layout == s.result.coverage.layout && g.front().code == s.result.coverage.code) {
        g.push_back(s.result.coverage);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({s.result.coverage});
  }
  for (const auto& g : groups) out.merged.push_back(merge_coverage(g));

  std::size_t pass = 0, fail = 0, error = 0;
  for (const auto& v : out.verdicts) {
    out.report += verdict_json(v) + "\n";
    out.summary += verdict_summary(v);
    switch (v.outcome) {
      case Outcome::kPass: ++pass; break;
      case Outcome::kFail: ++fail; break;
      case Outcome::kError: ++error; break;
    }
  }
  for (const auto& m : out.merged) {
    nlohmann::ordered_json j;
    j["merged_coverage"] = kv_hex(m.layout, 16);
    j["instruction_percent"] = m.instruction_percent();
    j["branch_percent"] = m.branch_percent();
    out.report += j.dump() + "\n";
    std::ostringstream line;
    line << "merged coverage " << kv_hex(m.layout, 16) << ": instructions "
         << m.instruction_percent() << "%, branch outcomes " << m.branch_percent() << "%\n";
    out.summary += line.str();
  }
  nlohmann::ordered_json total;
  total["scenarios"] = out.verdicts.size();
  total["pass"] = pass;
  total["fail"] = fail;
  total["error"] = error;
  out.report += total.dump() + "\n";
  out.summary += std::to_string(out.verdicts.size()) + " scenarios: " + std::to_string(pass) +
                 " pass, " + std::to_string(fail) + " fail, " + std::to_string(error) +
                 " error\n";

  if (options.out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*options.out_dir, ec);
    write_text(*options.out_dir / "report.jsonl", out.report);
    for (std::size_t i = 0; i < out.merged.size(); ++i)
      write_text(*options.out_dir / ("merged-" + std::to_string(i) + ".cov"),
                 out.merged[i].render());
  }
  return out;
}

}  // namespace vplat
