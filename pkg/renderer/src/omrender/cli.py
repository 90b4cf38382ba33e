"""omrender: turn experiment CSVs into figures.

Usage: omrender --csv PATH [--csv PATH ...] --kind KIND --out PATH [--title T]

Kinds: sweep-comparison (QM curves as lines, estimates as crosses with
error bars), delta-objective (worst deviation vs support cutoff),
region-sketch (faithful/unfaithful regions with the support boundary).
Exits nonzero on schema mismatch or empty input, writing nothing.
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omrender", description=__doc__.splitlines()[0])
    parser.add_argument("--csv", action="append", required=True, metavar="PATH",
                        help="input CSV (repeatable)")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--out", required=True, metavar="PATH")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(tuple(args.csv), args.kind, args.out, args.title)
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"omrender: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
