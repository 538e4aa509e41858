"""Command-line entry point: ``curvechar <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from .io import ConfigError, load_config
from .harness import RunConfig, run


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--seed", type=int, help="64-bit seed recorded in every output")
    p.add_argument("--output-dir", dest="output_dir", help="output directory (CURVECHAR_OUTPUT_DIR wins)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvechar", description=__doc__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("char", help="Fricke polynomial of a rank-2 word")
    p.add_argument("words", nargs=1, metavar="WORD")
    _common(p)

    p = sub.add_parser("equal", help="compare the characters of two words")
    p.add_argument("words", nargs=2, metavar="WORD")
    p.add_argument("--rank", type=int)
    p.add_argument("--trials", type=int)
    _common(p)

    p = sub.add_parser("search", help="bucket curve classes by character")
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--include-powers", dest="include_powers", action="store_true", default=None)
    p.add_argument("--width", type=int)
    p.add_argument("--annotate", action="store_true", default=None, help="self-intersection of bucket members")
    p.add_argument("--check", dest="checks", action="append", choices=["gr", "mcshane"])
    p.add_argument("--out", help="JSONL report file name")
    p.add_argument("--summary", help="CSV histogram file name")
    _common(p)

    p = sub.add_parser("selfint", help="self-intersection number of a curve class")
    p.add_argument("words", nargs=1, metavar="WORD")
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--bound", type=int)
    p.add_argument("--json", action="store_true", default=None)
    _common(p)

    for name, what in (("lengths", "length table over a grid"), ("pinch", "pinching experiment")):
        p = sub.add_parser(name, help=what)
        p.add_argument("--probe", dest="probes", action="append")
        _common(p)

    p = sub.add_parser("hempel", help="least length of non-simple classes over a grid")
    p.add_argument("--max-len", dest="max_len", type=int)
    _common(p)

    p = sub.add_parser("gr-check", help="exhaustive nonsingular-vector filter check")
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--width", type=int)
    _common(p)

    p = sub.add_parser("acceptance", help="run acceptance suites")
    p.add_argument("suite", nargs="?", default=None)
    _common(p)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("subcommand", "config")}
    try:
        cfg = RunConfig.resolve(args.subcommand, load_config(args.config), overrides)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    try:
        rec = run(args.subcommand, cfg)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in rec.stdout:
        print(line)
    return rec.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
