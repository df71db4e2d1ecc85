"""Golden reports: fixed (config, seed) pairs must reproduce exactly."""

import json
from pathlib import Path

import pytest

from centinv.partitions import Partition
from centinv.runner import RunConfig, build_report

GOLDEN_DIR = Path(__file__).parent / "golden"

CASES = [("gl", "2,1"), ("gl", "2,2"), ("gl", "3,1"), ("gl", "3,2,1"), ("sp", "2,1,1")]


@pytest.mark.parametrize("algebra,parts", CASES)
def test_report_matches_golden(algebra, parts):
    cfg = RunConfig(algebra=algebra, partitions=[parts], commands=[],
                    all_commands=True, seed=7)
    report = build_report(cfg, [Partition.parse(parts)])
    report.pop("timings")
    name = f"{algebra}_{parts.replace(',', '_')}.json"
    golden = json.loads((GOLDEN_DIR / name).read_text())
    assert json.dumps(report, sort_keys=True) == json.dumps(golden, sort_keys=True)
