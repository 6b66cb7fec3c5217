"""Command-line interface.

    gkdvlab <kind> --config experiment.toml [--out DIR] [--seed N]
                   [--workers N] [--format csv|json]

The subcommand fixes the experiment kind; the config file supplies everything
else.  `GKDVLAB_<SECTION>__<KEY>=value` environment variables override single
config keys before validation.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .config import KINDS, parse_config
from .errors import ConfigValidationError
from .runner import EXIT_VALIDATION, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkdvlab",
        description="Pseudospectral generalized-KdV laboratory",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} experiment")
        p.add_argument("--config", required=True, help="TOML experiment config")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument(
            "--workers", type=int, default=os.cpu_count() or 1,
            help="worker pool size for sweep evaluation",
        )
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="artifact format override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        print(f"error: cannot read config: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        config = parse_config(text, env_overrides=True)
    except ConfigValidationError as err:
        print("invalid config:", file=sys.stderr)
        for problem in err.problems:
            print(f"  - {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    if config.kind != args.kind:
        print(
            f"invalid config:\n  - experiment.kind: config says {config.kind!r} "
            f"but the {args.kind!r} subcommand was invoked",
            file=sys.stderr,
        )
        return EXIT_VALIDATION
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.format is not None:
        config = replace(config, output_format=args.format)
    out_dir = args.out if args.out is not None else config.output_dir
    code = run(config, out_dir, workers=args.workers)
    if code == 0:
        print(f"ok: artifacts in {out_dir}")
    else:
        print(f"failed with exit code {code}; see {out_dir}/metadata.json", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
