"""Command line interface.

nmq run     --config cfg.ini [--scenario fig2a] [--out dir] [--dt 1e-3]
            [--mode sector|full] [--engine nonmarkov|lindblad|closed]
            [--paper-compat]
nmq compare --config cfg.ini [same flags]

Exit codes: 0 ok, 2 config error, 3 invariant violation, 4 numeric
failure.
"""

from __future__ import annotations

import argparse
import sys

from . import runner
from .dynamics import MODE_FULL, MODE_SECTOR
from .errors import NmqError


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, metavar="PATH",
                     help="INI config file (may be empty when --scenario "
                          "names a preset)")
    sub.add_argument("--scenario", choices=runner.SCENARIOS,
                     help="preset to start from, or 'custom'")
    sub.add_argument("--out", metavar="DIR", help="output directory")
    sub.add_argument("--dt", type=float, help="integrator step override")
    sub.add_argument("--mode", choices=(MODE_SECTOR, MODE_FULL),
                     help="excitation-sector or full 2^N representation")
    sub.add_argument("--engine", choices=runner.ENGINES,
                     help="dynamics engine override")
    sub.add_argument("--paper-compat", action="store_true", default=None,
                     help="accept pulse parameters quoted at reduced "
                          "precision (zero-area tolerance 5e-4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmq",
        description="Heat current, power, and adiabatic fidelity of a "
                    "time-cut XY ring with per-site bosonic baths.")
    commands = parser.add_subparsers(dest="command", required=True)
    _add_common(commands.add_parser(
        "run", help="run a scenario, write one CSV per sweep value plus "
                    "manifest.json"))
    _add_common(commands.add_parser(
        "compare", help="tabulate engines with and without control"))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = runner.build_config(args.config, scenario=args.scenario,
                                  out=args.out, dt=args.dt, mode=args.mode,
                                  engine=args.engine,
                                  paper_compat=args.paper_compat)
        if args.command == "run":
            manifest = runner.run_scenario(cfg)
            print(f"wrote {len(manifest['runs'])} run(s) and manifest.json "
                  f"to {cfg.out_dir}")
        else:
            print(runner.format_report(runner.compare_baseline(cfg)))
    except NmqError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
