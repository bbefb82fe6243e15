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

// Drives the vplat executable through std::system and checks exit codes and
// output files.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = VPLAT_FIXTURE_DIR;

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "vplat_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs from the fixture directory; stdout and stderr land in one file.
Run vplat(const std::string& args, const std::string& input = "") {
  static int counter = 0;
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path dir = scratch(std::string(info->test_suite_name()) + "_" + info->name() + "_" +
                               std::to_string(counter++));
  std::string cmd = "cd '" + kFixtures.string() + "' && '" + std::string(VPLAT_BIN) + "' " + args;
  if (!input.empty()) {
    std::ofstream(dir / "stdin") << input;
    cmd += " < '" + (dir / "stdin").string() + "'";
  } else {
    cmd += " < /dev/null";
  }
  cmd += " > '" + (dir / "out").string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "out");
  return r;
}

TEST(Run, PassingScenarioExitsZero) {
  const auto r = vplat("run hello.scenario");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("hello: pass"), std::string::npos);
}

TEST(Run, FailingAssertionExitsOne) {
  const auto r = vplat("run wrong.scenario");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("[FAIL] exit_code = 7"), std::string::npos);
}

TEST(Run, TrapExitsTwo) {
  const auto r = vplat("run trap.scenario");
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_NE(r.out.find("environment-call"), std::string::npos);
}

TEST(Run, MissingInputsExitThree) {
  EXPECT_EQ(vplat("run missing.scenario").code, 3);
  EXPECT_EQ(vplat("run no_such_file.scenario").code, 3);
}

TEST(Run, UsageErrorsExitThree) {
  EXPECT_EQ(vplat("").code, 3);
  EXPECT_EQ(vplat("run").code, 3);
  EXPECT_EQ(vplat("run hello.scenario --bogus").code, 3);
  EXPECT_EQ(vplat("frobnicate").code, 3);
}

TEST(Run, HelpExitsZero) { EXPECT_EQ(vplat("--help").code, 0); }

TEST(Run, WritesArtifacts) {
  const fs::path out = scratch("artifacts");
  const auto r = vplat("run hello.scenario --trace --out '" + out.string() + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(out / "hello.trace"));
  EXPECT_TRUE(fs::exists(out / "hello.cov"));
  EXPECT_TRUE(fs::exists(out / "hello.faults"));
  const std::string verdict = slurp(out / "hello.verdict.json");
  EXPECT_NE(verdict.find("\"outcome\":\"pass\""), std::string::npos) << verdict;
}

TEST(Run, SeedOverrideIsReproducible) {
  const fs::path a = scratch("seed_a"), b = scratch("seed_b");
  vplat("run poll_slow.scenario --seed 5 --trace --out '" + a.string() + "'");
  vplat("run poll_slow.scenario --seed 5 --trace --out '" + b.string() + "'");
  EXPECT_EQ(slurp(a / "poll_slow.trace"), slurp(b / "poll_slow.trace"));
  EXPECT_EQ(slurp(a / "poll_slow.faults"), slurp(b / "poll_slow.faults"));
  EXPECT_FALSE(slurp(a / "poll_slow.faults").empty());
}

TEST(Campaign, AllPassExitsZeroAndWritesReport) {
  const fs::path out = scratch("campaign");
  const auto r = vplat("campaign pass.list --jobs 2 --out '" + out.string() + "'");
  EXPECT_EQ(r.code, 0) << r.out;
  const std::string report = slurp(out / "report.jsonl");
  EXPECT_NE(report.find("\"scenarios\":4"), std::string::npos) << report;
  EXPECT_NE(report.find("\"branch_percent\":100"), std::string::npos) << report;
}

TEST(Campaign, ExitCodesFollowWorstOutcome) {
  EXPECT_EQ(vplat("campaign mixed.list").code, 1);
  EXPECT_EQ(vplat("campaign broken.list").code, 2);
  EXPECT_EQ(vplat("campaign nowhere.list").code, 3);
  EXPECT_EQ(vplat("campaign pass.list --jobs 0").code, 3);
}

TEST(Validate, AcceptsGoodFilesAndRejectsBadOnes) {
  EXPECT_EQ(vplat("validate board.platform hello.scenario slow.campaign").code, 0);
  const auto bad = vplat("validate bad.platform");
  EXPECT_EQ(bad.code, 3) << bad.out;
  EXPECT_EQ(vplat("validate nowhere.platform").code, 3);
}

TEST(Report, SummarisesCampaignOutput) {
  const fs::path out = scratch("report");
  ASSERT_EQ(vplat("campaign pass.list --out '" + out.string() + "'").code, 0);
  const auto r = vplat("report '" + (out / "report.jsonl").string() + "'");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("hello"), std::string::npos) << r.out;
}

TEST(Step, QuitAndEofExitZero) {
  EXPECT_EQ(vplat("step board.platform hello.elf", "quit\n").code, 0);
  EXPECT_EQ(vplat("step board.platform hello.elf").code, 0);
}

TEST(Step, StepsAndInspects) {
  const auto r = vplat("step board.platform hello.elf", "reg 0\nstep 1\nregs\nmem 0x0 4\nbogus\nq\n");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("cycles 1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(vplat) "), std::string::npos);
}

TEST(Step, RawImageNeedsLoadAddress) {
  EXPECT_EQ(vplat("step board.platform hello.bin", "q\n").code, 3);
  EXPECT_EQ(vplat("step board.platform hello.bin --load-address 0x0", "step 100\nq\n").code, 0);
}

}  // namespace
