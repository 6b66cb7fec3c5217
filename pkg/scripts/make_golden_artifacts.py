#!/usr/bin/env python3
"""Regenerate the golden CSV artifacts consumed by the figure frontend tests.

Runs the four checked-in experiment configs and copies their tables into
frontend/testdata/golden/.  Deterministic: reruns reproduce identical bytes.

Usage: python scripts/make_golden_artifacts.py
"""

import shutil
import sys
from pathlib import Path

sys.path.insert(0, "src")

from gkdvlab.config import parse_config
from gkdvlab.runner import run

GOLDEN = Path("frontend/testdata/golden")
JOBS = {
    "simulate_k4": ("trace.csv",),
    "sweep_k4": ("sweep.csv",),
    "continuation_k4_tight": ("schedule.csv", "induction.csv"),
    "probe_k4": ("probes.csv",),
}


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, artifacts in JOBS.items():
        config = parse_config(Path(f"configs/{name}.toml").read_text())
        out = Path("out/golden") / name
        code = run(config, out)
        if code != 0:
            print(f"{name}: FAILED (exit {code})")
            return code
        for artifact in artifacts:
            shutil.copyfile(out / artifact, GOLDEN / artifact)
            print(f"{name}: {artifact} -> {GOLDEN / artifact}")
        shutil.copyfile(out / "metadata.json", GOLDEN / f"{name}.metadata.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
