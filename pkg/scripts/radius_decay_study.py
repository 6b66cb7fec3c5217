#!/usr/bin/env python3
"""End-to-end radius study: run the continuation experiment and print the table.

Usage: python scripts/radius_decay_study.py [--config configs/continuation_k4.toml] [--out out/radius_decay]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, "src")

from gkdvlab.config import parse_config
from gkdvlab.runner import run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--config", default="configs/continuation_k4.toml")
    parser.add_argument("--out", default="out/radius_decay")
    args = parser.parse_args()

    config = parse_config(Path(args.config).read_text())
    code = run(config, args.out)
    if code != 0:
        print(f"experiment failed (exit {code}); see {args.out}/metadata.json")
        return code
    schedule = Path(args.out) / "schedule.csv"
    print(schedule.read_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
