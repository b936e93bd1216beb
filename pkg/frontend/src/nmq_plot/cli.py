"""Command line interface.

nmq-plot --in <dir> --kind fig2|fig3|fig4 --out <file>

Reads a sweep directory written by `nmq run` and renders one static
figure.  Exit codes: 0 ok, 2 unusable input (schema mismatch or missing
series).
"""

from __future__ import annotations

import argparse
import sys

from .errors import PlotError
from .figures import KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmq-plot",
        description="Render a static figure from an nmq sweep directory.")
    parser.add_argument("--in", dest="in_dir", required=True, metavar="DIR",
                        help="directory holding manifest.json and run CSVs")
    parser.add_argument("--kind", required=True, choices=KINDS,
                        help="figure layout to render")
    parser.add_argument("--out", required=True, metavar="FILE",
                        help="output image path (format from the suffix)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = render(FigureSpec(in_dir=args.in_dir, kind=args.kind,
                                out_path=args.out))
    except PlotError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
