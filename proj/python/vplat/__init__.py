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

"""RV32I virtual platform with fault injection."""

import json

from ._vplat import (
    Error,
    Simulator,
    diff_traces,
    disassemble,
    image_hash,
    merge_coverage,
    normalize_campaign,
    normalize_platform,
)
from ._vplat import run_campaign as _run_campaign
from ._vplat import run_scenario as _run_scenario

__all__ = [
    "Error",
    "Simulator",
    "diff_traces",
    "disassemble",
    "image_hash",
    "merge_coverage",
    "normalize_campaign",
    "normalize_platform",
    "run_campaign",
    "run_scenario",
]


def run_scenario(path, seed=None, trace=True, out_dir=None):
    """Run one scenario file. The verdict comes back as a dict."""
    result = _run_scenario(str(path), seed, trace, None if out_dir is None else str(out_dir))
    result["verdict"] = json.loads(result["verdict"])
    return result


def run_campaign(list_path, jobs=1, seed=None, out_dir=None):
    """Run every scenario named in a list file."""
    result = _run_campaign(str(list_path), jobs, seed, None if out_dir is None else str(out_dir))
    result["records"] = [json.loads(line) for line in result["report"].splitlines() if line]
    return result
