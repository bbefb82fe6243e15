# Copyright 2026 The vplat Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import pathlib

import pytest

import vplat

FIXTURES = pathlib.Path(os.environ.get("VPLAT_FIXTURE_DIR", "build/tests/fixtures"))

pytestmark = pytest.mark.skipif(
    not (FIXTURES / "board.platform").exists(), reason="fixture directory not built"
)


def board():
    return (FIXTURES / "board.platform").read_text()


def test_disassemble():
    assert vplat.disassemble(0x00500093) == "addi"
    assert vplat.disassemble(0) is None


def test_platform_round_trip():
    text = vplat.normalize_platform(board())
    assert vplat.normalize_platform(text) == text
    with pytest.raises(vplat.Error):
        vplat.normalize_platform((FIXTURES / "bad.platform").read_text())


def test_campaign_round_trip():
    text = vplat.normalize_campaign((FIXTURES / "slow.campaign").read_text())
    assert "slow_response" in text
    assert vplat.normalize_campaign(text) == text


def test_step_until_exit():
    sim = vplat.Simulator(board())
    image = (FIXTURES / "hello.elf").read_bytes()
    assert sim.load(image) == 0
    first = sim.step()
    assert int(first.split()[0]) == 0
    sim.run()
    assert sim.halted
    assert sim.exit_code == 0
    assert sim.trap is None
    assert sim.reg(0) == 0
    assert len(sim.regs()) == 32


def test_trap_is_reported():
    sim = vplat.Simulator(board())
    sim.load((FIXTURES / "trap.elf").read_bytes())
    sim.run()
    assert sim.halted
    assert sim.trap[0] == "environment-call"


def test_peek_poke():
    sim = vplat.Simulator(board())
    assert sim.poke(0x20000000, b"\x78\x56\x34\x12")
    assert sim.peek(0x20000000) == 0x12345678
    assert sim.peek(0x20000000, 1) == 0x78
    assert sim.peek(0x50000000) is None


def test_campaign_attached_to_simulator_logs_activations():
    sim = vplat.Simulator(board())
    sim.load((FIXTURES / "fixed.elf").read_bytes())
    sim.attach_campaign((FIXTURES / "slow.campaign").read_text(), seed=3)
    sim.run()
    assert sim.exit_code == 1
    assert "slow" in sim.fault_log


def test_run_scenario_outcomes():
    assert vplat.run_scenario(FIXTURES / "hello.scenario")["outcome"] == "pass"
    assert vplat.run_scenario(FIXTURES / "wrong.scenario")["outcome"] == "fail"
    result = vplat.run_scenario(FIXTURES / "trap.scenario")
    assert result["verdict"]["outcome"] == "error"
    assert result["verdict"]["stop"] == "trap"


def test_replay_is_identical():
    a = vplat.run_scenario(FIXTURES / "poll_slow.scenario", seed=9)
    b = vplat.run_scenario(FIXTURES / "poll_slow.scenario", seed=9)
    assert a["trace"] == b["trace"]
    assert a["fault_log"] == b["fault_log"]
    assert vplat.diff_traces(a["trace"], b["trace"]) is None
    assert a["image_hash_before"] == a["image_hash_after"]
    image = (FIXTURES / "poll.elf").read_bytes()
    assert vplat.image_hash(image) == a["image_hash_before"]


def test_run_campaign_and_merge(tmp_path):
    result = vplat.run_campaign(FIXTURES / "pass.list", jobs=2, out_dir=tmp_path)
    assert result["all_passed"]
    assert [r["id"] for r in result["records"][:4]] == [
        "hello", "poll_slow", "branch_taken", "branch_not_taken"]
    assert (tmp_path / "report.jsonl").exists()

    taken = vplat.run_scenario(FIXTURES / "branch_taken.scenario")["coverage"]
    not_taken = vplat.run_scenario(FIXTURES / "branch_not_taken.scenario")["coverage"]
    _, _, branch = vplat.merge_coverage([taken, not_taken])
    assert branch == 100.0


def test_missing_file_raises():
    with pytest.raises(vplat.Error):
        vplat.run_scenario(FIXTURES / "no_such.scenario")
